#pragma once
// Shared domain types for probabilistic face embeddings.
//
// A probabilistic embedding is a unit-norm mean feature vector plus a
// per-dimension standard deviation. Everything downstream (scoring,
// decision confidence, evaluation) builds on the types in this header.
// All types are immutable after construction.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pfe {

enum class ErrorCode {
  DimensionMismatch,
  NonFiniteValue,
  ZeroNorm,
  NegativeSigma,
  TooFewSamples,
  EmptyInput,
  SingleSubject,
  NoImposters,
  NoGenuines,
  MissingKey,
  TooFewPoints,
  InvalidConfig,
  InvalidArgument,
  UnknownId,
  ParseError,
  HeaderMismatch,
  DuplicateId,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library is reported as an Error carrying a code, so
// callers (and the CLI) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Dense real-valued feature vector. Entries are always finite.
class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::vector<double> values);
  FeatureVector(std::initializer_list<double> values)
      : FeatureVector(std::vector<double>(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  double l2_norm() const noexcept;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<double> values_;
};

class ProbabilisticEmbedding;

// Builds a validated embedding. The mean is rescaled to unit L2 norm and
// sigma is divided by the same factor, i.e. normalization is treated as a
// linear change of scale of the feature space.
ProbabilisticEmbedding validate_embedding(const FeatureVector& raw_mean,
                                          const FeatureVector& raw_sigma,
                                          std::string image_id,
                                          std::string subject_id,
                                          std::optional<double> quality = std::nullopt);

class ProbabilisticEmbedding {
 public:
  const std::string& image_id() const noexcept { return image_id_; }
  const std::string& subject_id() const noexcept { return subject_id_; }
  const FeatureVector& mean() const noexcept { return mean_; }
  const FeatureVector& sigma() const noexcept { return sigma_; }
  std::optional<double> quality() const noexcept { return quality_; }
  std::size_t dimension() const noexcept { return mean_.size(); }

  friend bool operator==(const ProbabilisticEmbedding&,
                         const ProbabilisticEmbedding&) = default;

 private:
  friend ProbabilisticEmbedding validate_embedding(const FeatureVector&,
                                                   const FeatureVector&,
                                                   std::string, std::string,
                                                   std::optional<double>);
  ProbabilisticEmbedding(std::string image_id, std::string subject_id,
                         FeatureVector mean, FeatureVector sigma,
                         std::optional<double> quality)
      : image_id_(std::move(image_id)),
        subject_id_(std::move(subject_id)),
        mean_(std::move(mean)),
        sigma_(std::move(sigma)),
        quality_(quality) {}

  std::string image_id_;
  std::string subject_id_;
  FeatureVector mean_;
  FeatureVector sigma_;
  std::optional<double> quality_;
};

enum class Label { Genuine, Imposter };
enum class Decision { Match, NonMatch };

std::string_view to_string(Label label) noexcept;
std::string_view to_string(Decision decision) noexcept;

struct Pair {
  std::string probe_id;
  std::string reference_id;
  Label label = Label::Genuine;

  friend bool operator==(const Pair&, const Pair&) = default;
};

using PairSet = std::vector<Pair>;

// Outcome of comparing one pair. The confidence fields are empty until the
// decision module fills them; min_quality is empty unless both embeddings
// carry a quality.
struct ComparisonResult {
  Pair pair;
  double score = 0.0;
  double score_uncertainty = 0.0;
  Decision decision = Decision::NonMatch;
  std::optional<double> decision_confidence;
  std::optional<double> intuitive_confidence;
  std::optional<double> min_quality;

  friend bool operator==(const ComparisonResult&, const ComparisonResult&) = default;
};

struct ThresholdCalibration {
  // +infinity when no observed imposter score meets the FMR target.
  double threshold = 0.0;
  double fmr_target = 0.001;
  double achieved_fmr = 0.0;
  double achieved_fnmr = 0.0;

  friend bool operator==(const ThresholdCalibration&,
                         const ThresholdCalibration&) = default;
};

enum class RejectionKey { ScoreUncertainty, DecisionConfidence, IntuitiveConfidence, MinQuality };

inline constexpr RejectionKey kAllRejectionKeys[] = {
    RejectionKey::ScoreUncertainty, RejectionKey::DecisionConfidence,
    RejectionKey::IntuitiveConfidence, RejectionKey::MinQuality};

// CLI spelling: score-uncertainty, decision-confidence, ...
std::string_view to_string(RejectionKey key) noexcept;
RejectionKey parse_rejection_key(std::string_view name);

struct ErcPoint {
  double reject_fraction = 0.0;
  double fnmr = 0.0;
  // Empty when no imposter comparison remains.
  std::optional<double> fmr;

  friend bool operator==(const ErcPoint&, const ErcPoint&) = default;
};

struct ErcCurve {
  RejectionKey rejection_key = RejectionKey::ScoreUncertainty;
  double threshold = 0.0;
  std::vector<ErcPoint> points;
  // Reject fraction at which no genuine comparison was left (FNMR undefined)
  // and the curve stopped; empty when the whole grid was evaluated.
  std::optional<double> terminated_at;

  friend bool operator==(const ErcCurve&, const ErcCurve&) = default;
};

}  // namespace pfe
