#include "pfe/decision.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "pfe/scoring.hpp"

namespace pfe {

ConfidenceParams::ConfidenceParams(double alpha, double threshold, bool clamp)
    : alpha_(alpha), threshold_(threshold), clamp_(clamp) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be finite and > 0");
  }
  if (!std::isfinite(threshold)) {
    throw Error(ErrorCode::InvalidArgument, "confidence threshold must be finite");
  }
}

double parse_alpha(std::string_view text) {
  if (text == "arcface") return 2.0;
  if (text == "magface" || text == "curricularface") return 5.0;
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument,
                "alpha must be a positive number or one of arcface, magface, curricularface");
  }
  return value;
}

namespace {

double logistic(double z) noexcept {
  // Branch keeps exp() from overflowing for large |z|.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double sigmoid_decision(double score, const ConfidenceParams& params) noexcept {
  return logistic(params.alpha() * (score - params.threshold()));
}

double sigmoid_slope(double score, const ConfidenceParams& params) noexcept {
  const double z = params.alpha() * (score - params.threshold());
  // 1 - delta(z) == delta(-z), computed without cancellation.
  return params.alpha() * logistic(z) * logistic(-z);
}

double decision_confidence(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y,
                           const ConfidenceParams& params) {
  const double s = cosine_similarity(x, y);
  const double g = sigmoid_slope(s, params);
  const auto xm = x.mean().values();
  const auto ym = y.mean().values();
  const auto xs = x.sigma().values();
  const auto ys = y.sigma().values();
  double sum = 0.0;
  for (std::size_t i = 0; i < xm.size(); ++i) {
    const double dx = g * ym[i];
    const double dy = g * xm[i];
    sum += dx * dx * xs[i] * xs[i] + dy * dy * ys[i] * ys[i];
  }
  const double confidence = 1.0 - std::sqrt(sum);
  return params.clamp() ? std::clamp(confidence, 0.0, 1.0) : confidence;
}

double intuitive_confidence(double score, double threshold) noexcept {
  return std::abs(score - threshold);
}

ComparisonResult assess(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y,
                        const ConfidenceParams& params, Label label) {
  ComparisonResult r = compare(x, y, params.threshold(), label);
  const double g = sigmoid_slope(r.score, params);
  const double confidence = 1.0 - g * r.score_uncertainty;
  r.decision_confidence = params.clamp() ? std::clamp(confidence, 0.0, 1.0) : confidence;
  r.intuitive_confidence = intuitive_confidence(r.score, params.threshold());
  return r;
}

std::optional<std::size_t> bin_index(double value, double lo, double hi,
                                     std::size_t bins) noexcept {
  if (!(value >= lo && value <= hi) || bins == 0) return std::nullopt;
  if (value == hi) return bins - 1;
  const auto idx = static_cast<std::size_t>((value - lo) / (hi - lo) * static_cast<double>(bins));
  return std::min(idx, bins - 1);
}

Heatmap confidence_heatmap_data(std::span<const ComparisonResult> results,
                                const HeatmapSpec& spec, std::optional<double> threshold) {
  if (results.empty()) throw Error(ErrorCode::EmptyInput, "heatmap needs at least one result");
  if (spec.score_bins == 0 || spec.confidence_bins == 0 || !(spec.score_max > spec.score_min) ||
      !(spec.confidence_max > spec.confidence_min)) {
    throw Error(ErrorCode::InvalidArgument, "heatmap bins must be >= 1 and ranges non-empty");
  }
  Heatmap map;
  map.spec = spec;
  map.threshold = threshold;
  map.genuine.assign(spec.score_bins * spec.confidence_bins, 0);
  map.imposter.assign(spec.score_bins * spec.confidence_bins, 0);
  for (const auto& r : results) {
    if (!r.decision_confidence) {
      throw Error(ErrorCode::MissingKey, "result without decision confidence");
    }
    const auto si = bin_index(r.score, spec.score_min, spec.score_max, spec.score_bins);
    const auto ci = bin_index(*r.decision_confidence, spec.confidence_min, spec.confidence_max,
                              spec.confidence_bins);
    if (!si || !ci) {
      ++map.outside;
      continue;
    }
    auto& target = r.pair.label == Label::Genuine ? map.genuine : map.imposter;
    ++target[*si * spec.confidence_bins + *ci];
  }
  return map;
}

std::vector<std::optional<double>> mean_confidence_by_score(
    std::span<const ComparisonResult> results, std::size_t bins, double score_min,
    double score_max) {
  std::vector<double> sum(bins, 0.0);
  std::vector<std::size_t> n(bins, 0);
  for (const auto& r : results) {
    if (!r.decision_confidence) {
      throw Error(ErrorCode::MissingKey, "result without decision confidence");
    }
    if (const auto b = bin_index(r.score, score_min, score_max, bins)) {
      sum[*b] += *r.decision_confidence;
      ++n[*b];
    }
  }
  std::vector<std::optional<double>> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    if (n[b] > 0) out[b] = sum[b] / static_cast<double>(n[b]);
  }
  return out;
}

}  // namespace pfe
