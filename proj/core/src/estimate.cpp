#include "pfe/estimate.hpp"

#include <cmath>

namespace pfe {

double population_std(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::TooFewSamples, "standard deviation needs at least 2 values");
  }
  // Shift by the first value: exact zero for constant input.
  const double shift = values[0];
  double mean = 0.0;
  for (double v : values) mean += v - shift;
  mean /= static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - shift - mean) * (v - shift - mean);
  return std::sqrt(sq / static_cast<double>(values.size()));
}

namespace {

std::vector<double> unit(const FeatureVector& v) {
  const double norm = v.l2_norm();
  if (norm == 0.0) throw Error(ErrorCode::ZeroNorm, "stochastic sample has zero norm");
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

}  // namespace

ProbabilisticEmbedding estimate_uncertainty(const StochasticSampleSet& set,
                                            const EstimateOptions& options) {
  const std::size_t t = set.samples.size();
  if (t < 2) {
    throw Error(ErrorCode::TooFewSamples,
                "image '" + set.image_id + "' has " + std::to_string(t) +
                    " stochastic samples, need at least 2");
  }
  const std::size_t dim = set.deterministic.size();
  for (const auto& s : set.samples) {
    if (s.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "image '" + set.image_id + "': sample dimension " + std::to_string(s.size()) +
                      " differs from deterministic dimension " + std::to_string(dim));
    }
  }

  // Row-major t x dim matrix of (possibly normalized) samples.
  std::vector<double> rows;
  rows.reserve(t * dim);
  for (const auto& s : set.samples) {
    if (options.normalize_samples) {
      auto u = unit(s);
      rows.insert(rows.end(), u.begin(), u.end());
    } else {
      rows.insert(rows.end(), s.begin(), s.end());
    }
  }

  std::vector<double> sigma(dim);
  std::vector<double> column(t);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t k = 0; k < t; ++k) column[k] = rows[k * dim + i];
    sigma[i] = population_std(column);
  }

  if (options.normalize_samples) {
    return validate_embedding(FeatureVector(unit(set.deterministic)), FeatureVector(std::move(sigma)),
                              set.image_id, set.subject_id, set.quality);
  }
  return validate_embedding(set.deterministic, FeatureVector(std::move(sigma)), set.image_id,
                            set.subject_id, set.quality);
}

}  // namespace pfe
