#pragma once
// Per-dimension embedding uncertainty from a set of stochastic embeddings
// (e.g. the outputs of repeated dropout forward passes of one image).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfe/types.hpp"

namespace pfe {

struct StochasticSampleSet {
  std::string image_id;
  std::string subject_id;
  FeatureVector deterministic;
  std::vector<FeatureVector> samples;
  std::optional<double> quality;
};

// sqrt of the mean squared deviation from the mean (divisor t, not t - 1).
// Throws TooFewSamples for fewer than two values.
double population_std(std::span<const double> values);

struct EstimateOptions {
  // L2-normalize every stochastic sample before taking the spread, so sigma
  // lives on the same unit-sphere scale as the normalized mean.
  bool normalize_samples = true;
};

// sigma[i] is the population std of dimension i across the samples; the
// mean is the deterministic embedding. With normalize_samples the
// deterministic vector is normalized too and sigma is kept as measured;
// without it, sigma is on the raw scale and gets rescaled together with the
// mean by validate_embedding.
ProbabilisticEmbedding estimate_uncertainty(const StochasticSampleSet& set,
                                            const EstimateOptions& options = {});

}  // namespace pfe
