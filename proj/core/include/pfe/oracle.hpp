#pragma once
// Monte-Carlo reference for the analytic uncertainty formulas.
//
// Every mean dimension of both embeddings is perturbed by an independent
// zero-mean Gaussian with that dimension's sigma, the cosine numerator
// sum_i x~_i * y~_i is evaluated, and the empirical std over the draws is
// returned. By default perturbed vectors are NOT renormalized, which is the
// linearization domain of the analytic formulas; renormalize measures the gap
// to the fully normalized cosine.
//
// Draws are split into fixed-size batches with their own seeded substreams
// and merged in batch order, so results are independent of thread count.
//
// This code deliberately does not call into scoring/decision.

#include <cstdint>

#include "pfe/decision.hpp"
#include "pfe/types.hpp"

namespace pfe::oracle {

struct McOptions {
  bool renormalize = false;
  std::size_t batch_size = 4096;
  // 0 = hardware concurrency.
  std::size_t threads = 0;
};

inline constexpr std::size_t kMinSamples = 1000;

// Empirical std of the perturbed cosine score. n_samples >= 1000.
double mc_score_std(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y,
                    std::size_t n_samples, std::uint64_t seed, const McOptions& options = {});

// Empirical std of 1 / (1 + exp(-alpha (S~ - d))) under the same perturbation;
// compare against 1 - confidence (unclamped).
double mc_decision_confidence_std(const ProbabilisticEmbedding& x,
                                  const ProbabilisticEmbedding& y, const ConfidenceParams& params,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const McOptions& options = {});

}  // namespace pfe::oracle
