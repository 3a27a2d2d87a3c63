#pragma once
// Decision confidence for threshold-based verification.
//
// The step decision "score >= d" is approximated by the sigmoid
//
//   delta(s) = 1 / (1 + exp(-alpha * (s - d)))
//
// and the embedding uncertainty is propagated through delta(S(x, y)). The
// chain rule gives d delta / d x_i = alpha * delta * (1 - delta) * y_i, so the
// propagated std factorizes as alpha * delta * (1 - delta) * dS and the
// confidence is
//
//   conf = 1 - alpha * delta(s) * (1 - delta(s)) * dS.
//
// Note that the partial derivatives are squared inside the propagation sum;
// the unsquared form does not follow from first-order propagation and is not
// provided.

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pfe/types.hpp"

namespace pfe {

class ConfidenceParams {
 public:
  // alpha must be > 0 and finite, threshold finite.
  ConfidenceParams(double alpha, double threshold, bool clamp = true);

  double alpha() const noexcept { return alpha_; }
  double threshold() const noexcept { return threshold_; }
  bool clamp() const noexcept { return clamp_; }

 private:
  double alpha_;
  double threshold_;
  bool clamp_;
};

// Named alpha presets: "arcface" -> 2, "magface" -> 5, "curricularface" -> 5.
// Plain numbers are accepted too ("3.5").
double parse_alpha(std::string_view text);

inline constexpr std::array<double, 5> kAlphaSweep = {1.0, 2.0, 3.0, 5.0, 7.0};
inline constexpr double kDefaultAlpha = 5.0;

double sigmoid_decision(double score, const ConfidenceParams& params) noexcept;

// alpha * delta(s) * (1 - delta(s)), the derivative of the sigmoid w.r.t. s.
double sigmoid_slope(double score, const ConfidenceParams& params) noexcept;

// Confidence computed from the propagation sum over all 2N inputs. Clamped to
// [0, 1] when params.clamp() is set.
double decision_confidence(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y,
                           const ConfidenceParams& params);

// |score - threshold|.
double intuitive_confidence(double score, double threshold) noexcept;

// Fully populated comparison: decision and both confidences use the
// threshold stored in params, so they can never disagree about d.
ComparisonResult assess(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y,
                        const ConfidenceParams& params, Label label = Label::Genuine);

struct HeatmapSpec {
  std::size_t score_bins = 100;
  std::size_t confidence_bins = 100;
  double score_min = -1.0;
  double score_max = 1.0;
  double confidence_min = 0.0;
  double confidence_max = 1.0;
};

// 2-D histogram over (score, decision confidence), split by label.
struct Heatmap {
  HeatmapSpec spec;
  std::optional<double> threshold;
  // Row-major [score_bin][confidence_bin].
  std::vector<std::size_t> genuine;
  std::vector<std::size_t> imposter;
  // Results falling outside the histogram range.
  std::size_t outside = 0;

  std::size_t count(std::size_t score_bin, std::size_t confidence_bin) const {
    const std::size_t i = score_bin * spec.confidence_bins + confidence_bin;
    return genuine[i] + imposter[i];
  }
};

// Index of the bin holding value, or nullopt outside [lo, hi]. The upper
// edge belongs to the last bin.
std::optional<std::size_t> bin_index(double value, double lo, double hi, std::size_t bins) noexcept;

Heatmap confidence_heatmap_data(std::span<const ComparisonResult> results,
                                const HeatmapSpec& spec = {},
                                std::optional<double> threshold = std::nullopt);

// Mean decision confidence of the results in each score bin (empty bins give
// nullopt).
std::vector<std::optional<double>> mean_confidence_by_score(
    std::span<const ComparisonResult> results, std::size_t bins, double score_min,
    double score_max);

}  // namespace pfe
