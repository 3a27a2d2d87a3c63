#pragma once
// Cosine comparison score and its first-order propagated uncertainty.
//
// With unit-norm means the cosine similarity is the plain dot product
// S = sum_i x_i * y_i. Treating every feature dimension of both embeddings
// as an independent input with std sigma, and neglecting cross-feature
// correlations, first-order propagation gives
//
//   dS = sqrt( sum_i y_i^2 * sx_i^2 + sum_i x_i^2 * sy_i^2 ).

#include <span>

#include "pfe/types.hpp"

namespace pfe {

// Dot product of the unit means, clamped to [-1, 1].
double cosine_similarity(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y);

double score_uncertainty(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y);

// sqrt( sum_i gradient_i^2 * sigma_i^2 ): generic first-order propagation of
// independent input uncertainties through a differentiable function.
double propagate_uncertainty(std::span<const double> gradient, std::span<const double> sigma);

inline double propagate_uncertainty(const FeatureVector& gradient, const FeatureVector& sigma) {
  return propagate_uncertainty(gradient.values(), sigma.values());
}

// Score, score uncertainty and decision for one pair; decision is Match iff
// score >= threshold. Confidence fields are left empty (see decision.hpp).
ComparisonResult compare(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y,
                         double threshold, Label label = Label::Genuine);

}  // namespace pfe
