#include "pfe/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace pfe {

namespace {

void require_same_dimension(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y) {
  if (x.dimension() != y.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cannot compare '" + x.image_id() + "' (d=" + std::to_string(x.dimension()) +
                    ") with '" + y.image_id() + "' (d=" + std::to_string(y.dimension()) + ")");
  }
}

}  // namespace

double cosine_similarity(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y) {
  require_same_dimension(x, y);
  const auto a = x.mean().values();
  const auto b = y.mean().values();
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::clamp(dot, -1.0, 1.0);
}

double score_uncertainty(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y) {
  require_same_dimension(x, y);
  const auto xm = x.mean().values();
  const auto ym = y.mean().values();
  const auto xs = x.sigma().values();
  const auto ys = y.sigma().values();
  // dS/dx_i = y_i and dS/dy_i = x_i.
  double sum = 0.0;
  for (std::size_t i = 0; i < xm.size(); ++i) {
    // One term per coordinate so that swapping x and y is bit-exact.
    sum += ym[i] * ym[i] * xs[i] * xs[i] + xm[i] * xm[i] * ys[i] * ys[i];
  }
  return std::sqrt(sum);
}

double propagate_uncertainty(std::span<const double> gradient, std::span<const double> sigma) {
  if (gradient.size() != sigma.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "gradient has " + std::to_string(gradient.size()) + " entries but sigma has " +
                    std::to_string(sigma.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < gradient.size(); ++i) {
    sum += gradient[i] * gradient[i] * sigma[i] * sigma[i];
  }
  return std::sqrt(sum);
}

ComparisonResult compare(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y,
                         double threshold, Label label) {
  // +inf is allowed: it is what calibration returns when nothing may match.
  if (std::isnan(threshold)) throw Error(ErrorCode::InvalidArgument, "threshold is NaN");
  ComparisonResult r;
  r.pair = Pair{x.image_id(), y.image_id(), label};
  r.score = cosine_similarity(x, y);
  r.score_uncertainty = score_uncertainty(x, y);
  r.decision = r.score >= threshold ? Decision::Match : Decision::NonMatch;
  if (x.quality() && y.quality()) r.min_quality = std::min(*x.quality(), *y.quality());
  return r;
}

}  // namespace pfe
