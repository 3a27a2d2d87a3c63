#pragma once
// Verification evaluation: genuine/imposter pairing, threshold calibration at
// a fixed false match rate, FNMR/FMR, and error-versus-reject curves.
//
// Conventions:
//  - a comparison is a Match iff score >= threshold;
//  - the threshold is calibrated once on the full set and kept fixed while
//    comparisons are rejected;
//  - rejection ties keep the original result order (stable sort).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pfe/decision.hpp"
#include "pfe/types.hpp"

namespace pfe {

struct EvalConfig {
  double fmr_target = 0.001;
  std::size_t imposters_per_image = 30;
  // Reject fractions k / (erc_steps - 1), k = 0, 1, ..., up to
  // max_reject_fraction.
  std::size_t erc_steps = 101;
  double max_reject_fraction = 0.95;
  std::uint64_t rng_seed = 0;
  // Drop an imposter pair (b, a) when (a, b) was already drawn.
  bool dedup_imposters = false;

  void validate() const;
};

// Lookup of embeddings by image id. Holds pointers into the caller's storage.
class EmbeddingIndex {
 public:
  explicit EmbeddingIndex(std::span<const ProbabilisticEmbedding> embeddings);
  const ProbabilisticEmbedding& at(const std::string& image_id) const;
  bool contains(const std::string& image_id) const { return by_id_.count(image_id) != 0; }

 private:
  std::unordered_map<std::string, const ProbabilisticEmbedding*> by_id_;
};

// All unordered same-subject pairs (in input order) followed by, for each
// image, up to imposters_per_image distinct other-subject references drawn
// without replacement from a generator seeded with cfg.rng_seed.
PairSet build_pairs(std::span<const ProbabilisticEmbedding> embeddings, const EvalConfig& cfg);

// Scores every pair (in parallel; output order matches pairs).
std::vector<ComparisonResult> assess_pairs(const EmbeddingIndex& index, const PairSet& pairs,
                                           const ConfidenceParams& params);

struct ScoredLabel {
  double score = 0.0;
  Label label = Label::Genuine;
};

std::vector<ScoredLabel> score_pairs(const EmbeddingIndex& index, const PairSet& pairs);
std::vector<ScoredLabel> scored_labels(std::span<const ComparisonResult> results);

// Smallest candidate t among the observed imposter scores and +inf such that
// (#imposters >= t) / #imposters <= fmr_target.
ThresholdCalibration calibrate_threshold(std::span<const ScoredLabel> scores, double fmr_target);

struct ErrorRates {
  // Empty when the corresponding class has no comparison.
  std::optional<double> fnmr;
  std::optional<double> fmr;
};

ErrorRates fnmr_fmr(std::span<const ScoredLabel> scores, double threshold);

// Indices of results in rejection order (first rejected first).
std::vector<std::size_t> rejection_order(std::span<const ComparisonResult> results,
                                         RejectionKey key);

ErcCurve erc(std::span<const ComparisonResult> results, RejectionKey key, const EvalConfig& cfg,
             const ThresholdCalibration& calib);

// Trapezoidal area under (reject_fraction, fnmr).
double erc_auc(const ErcCurve& curve);

}  // namespace pfe
