#include "pfe/types.hpp"

#include <cmath>

namespace pfe {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::NegativeSigma: return "NegativeSigma";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SingleSubject: return "SingleSubject";
    case ErrorCode::NoImposters: return "NoImposters";
    case ErrorCode::NoGenuines: return "NoGenuines";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::HeaderMismatch: return "HeaderMismatch";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::NonFiniteValue,
                  "non-finite feature value at index " + std::to_string(i));
    }
  }
}

double FeatureVector::l2_norm() const noexcept {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

ProbabilisticEmbedding validate_embedding(const FeatureVector& raw_mean,
                                          const FeatureVector& raw_sigma,
                                          std::string image_id, std::string subject_id,
                                          std::optional<double> quality) {
  if (raw_mean.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "embedding has dimension 0");
  }
  if (raw_mean.size() != raw_sigma.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "mean has dimension " + std::to_string(raw_mean.size()) +
                    " but sigma has " + std::to_string(raw_sigma.size()));
  }
  for (std::size_t i = 0; i < raw_sigma.size(); ++i) {
    if (raw_sigma[i] < 0.0) {
      throw Error(ErrorCode::NegativeSigma,
                  "negative sigma at index " + std::to_string(i));
    }
  }
  if (quality && (!std::isfinite(*quality) || *quality < 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "quality must be finite and >= 0");
  }
  const double norm = raw_mean.l2_norm();
  if (norm == 0.0) {
    throw Error(ErrorCode::ZeroNorm, "mean vector has zero norm");
  }
  if (!std::isfinite(norm)) {
    throw Error(ErrorCode::NonFiniteValue, "mean vector norm overflows");
  }

  std::vector<double> mean(raw_mean.begin(), raw_mean.end());
  std::vector<double> sigma(raw_sigma.begin(), raw_sigma.end());
  // Already unit length up to rounding: keep the values bit-for-bit so that
  // re-validating (e.g. after a file round trip) is exact.
  if (std::abs(norm - 1.0) > 1e-12) {
    for (double& v : mean) v /= norm;
    for (double& v : sigma) v /= norm;
  }

  FeatureVector unit_mean(std::move(mean));
  if (std::abs(unit_mean.l2_norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::NonFiniteValue, "mean could not be normalized to unit length");
  }
  return ProbabilisticEmbedding(std::move(image_id), std::move(subject_id),
                                std::move(unit_mean), FeatureVector(std::move(sigma)),
                                quality);
}

std::string_view to_string(Label label) noexcept {
  return label == Label::Genuine ? "genuine" : "imposter";
}

std::string_view to_string(Decision decision) noexcept {
  return decision == Decision::Match ? "match" : "non-match";
}

std::string_view to_string(RejectionKey key) noexcept {
  switch (key) {
    case RejectionKey::ScoreUncertainty: return "score-uncertainty";
    case RejectionKey::DecisionConfidence: return "decision-confidence";
    case RejectionKey::IntuitiveConfidence: return "intuitive-confidence";
    case RejectionKey::MinQuality: return "min-quality";
  }
  return "unknown";
}

RejectionKey parse_rejection_key(std::string_view name) {
  for (RejectionKey key : kAllRejectionKeys) {
    if (to_string(key) == name) return key;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown rejection key '" + std::string(name) + "'");
}

}  // namespace pfe
