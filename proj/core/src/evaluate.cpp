#include "pfe/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <unordered_set>

#include "pfe/detail/parallel.hpp"
#include "pfe/scoring.hpp"

namespace pfe {

void EvalConfig::validate() const {
  if (!(fmr_target > 0.0 && fmr_target < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "fmr_target must lie in (0, 1)");
  }
  if (imposters_per_image < 1) {
    throw Error(ErrorCode::InvalidConfig, "imposters_per_image must be >= 1");
  }
  if (erc_steps < 2) throw Error(ErrorCode::InvalidConfig, "erc_steps must be >= 2");
  if (!(max_reject_fraction >= 0.0 && max_reject_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "max_reject_fraction must lie in [0, 1]");
  }
}

EmbeddingIndex::EmbeddingIndex(std::span<const ProbabilisticEmbedding> embeddings) {
  by_id_.reserve(embeddings.size());
  for (const auto& e : embeddings) {
    if (!by_id_.emplace(e.image_id(), &e).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate image id '" + e.image_id() + "'");
    }
  }
}

const ProbabilisticEmbedding& EmbeddingIndex::at(const std::string& image_id) const {
  const auto it = by_id_.find(image_id);
  if (it == by_id_.end()) {
    throw Error(ErrorCode::UnknownId, "unknown image id '" + image_id + "'");
  }
  return *it->second;
}

PairSet build_pairs(std::span<const ProbabilisticEmbedding> embeddings, const EvalConfig& cfg) {
  cfg.validate();
  const EmbeddingIndex ids(embeddings);  // rejects duplicate ids

  // Dense subject index per image, in first-seen order.
  std::unordered_map<std::string, std::size_t> subject_of;
  std::vector<std::size_t> subject(embeddings.size());
  std::vector<std::size_t> subject_size;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    auto [it, inserted] = subject_of.emplace(embeddings[i].subject_id(), subject_size.size());
    if (inserted) subject_size.push_back(0);
    subject[i] = it->second;
    ++subject_size[it->second];
  }
  if (subject_size.size() < 2) {
    throw Error(ErrorCode::SingleSubject, "imposter pairs need at least two subjects");
  }

  PairSet pairs;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    for (std::size_t j = i + 1; j < embeddings.size(); ++j) {
      if (subject[i] == subject[j]) {
        pairs.push_back({embeddings[i].image_id(), embeddings[j].image_id(), Label::Genuine});
      }
    }
  }

  std::mt19937_64 rng(cfg.rng_seed);
  const std::size_t n = embeddings.size();
  std::set<std::pair<std::size_t, std::size_t>> drawn;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pool_size = n - subject_size[subject[i]];
    const std::size_t k = std::min(cfg.imposters_per_image, pool_size);
    chosen.clear();
    if (pool_size <= 4 * k) {
      // Small pool: partial Fisher-Yates over the explicit candidate list.
      std::vector<std::size_t> pool;
      pool.reserve(pool_size);
      for (std::size_t j = 0; j < n; ++j) {
        if (subject[j] != subject[i]) pool.push_back(j);
      }
      for (std::size_t m = 0; m < k; ++m) {
        std::uniform_int_distribution<std::size_t> pick(m, pool.size() - 1);
        std::swap(pool[m], pool[pick(rng)]);
        chosen.push_back(pool[m]);
      }
    } else {
      // Large pool: rejection sampling without replacement.
      std::unordered_set<std::size_t> seen;
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      while (chosen.size() < k) {
        const std::size_t j = pick(rng);
        if (subject[j] == subject[i] || !seen.insert(j).second) continue;
        chosen.push_back(j);
      }
    }
    for (std::size_t j : chosen) {
      if (cfg.dedup_imposters && !drawn.emplace(std::min(i, j), std::max(i, j)).second) continue;
      pairs.push_back({embeddings[i].image_id(), embeddings[j].image_id(), Label::Imposter});
    }
  }
  return pairs;
}

std::vector<ComparisonResult> assess_pairs(const EmbeddingIndex& index, const PairSet& pairs,
                                           const ConfidenceParams& params) {
  std::vector<ComparisonResult> out(pairs.size());
  detail::parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& p = pairs[i];
    out[i] = assess(index.at(p.probe_id), index.at(p.reference_id), params, p.label);
  });
  return out;
}

std::vector<ScoredLabel> score_pairs(const EmbeddingIndex& index, const PairSet& pairs) {
  std::vector<ScoredLabel> out(pairs.size());
  detail::parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& p = pairs[i];
    out[i] = {cosine_similarity(index.at(p.probe_id), index.at(p.reference_id)), p.label};
  });
  return out;
}

std::vector<ScoredLabel> scored_labels(std::span<const ComparisonResult> results) {
  std::vector<ScoredLabel> out;
  out.reserve(results.size());
  for (const auto& r : results) out.push_back({r.score, r.pair.label});
  return out;
}

ThresholdCalibration calibrate_threshold(std::span<const ScoredLabel> scores, double fmr_target) {
  if (!(fmr_target > 0.0 && fmr_target <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "fmr_target must lie in (0, 1]");
  }
  std::vector<double> imposter;
  std::size_t genuine_count = 0;
  for (const auto& s : scores) {
    if (s.label == Label::Imposter) {
      imposter.push_back(s.score);
    } else {
      ++genuine_count;
    }
  }
  if (imposter.empty()) throw Error(ErrorCode::NoImposters, "calibration needs imposter scores");
  if (genuine_count == 0) throw Error(ErrorCode::NoGenuines, "calibration needs genuine scores");

  std::sort(imposter.begin(), imposter.end(), std::greater<>());
  const auto n = static_cast<double>(imposter.size());

  // Walk the distinct imposter scores downwards; FMR only grows as the
  // candidate threshold drops, so stop at the first violation.
  double threshold = std::numeric_limits<double>::infinity();
  std::size_t accepted = 0;
  std::size_t i = 0;
  while (i < imposter.size()) {
    const double candidate = imposter[i];
    std::size_t j = i;
    while (j < imposter.size() && imposter[j] == candidate) ++j;
    if (static_cast<double>(j) / n > fmr_target) break;
    threshold = candidate;
    accepted = j;
    i = j;
  }

  ThresholdCalibration calib;
  calib.threshold = threshold;
  calib.fmr_target = fmr_target;
  calib.achieved_fmr = static_cast<double>(accepted) / n;
  std::size_t rejected_genuine = 0;
  for (const auto& s : scores) {
    if (s.label == Label::Genuine && s.score < threshold) ++rejected_genuine;
  }
  calib.achieved_fnmr = static_cast<double>(rejected_genuine) / static_cast<double>(genuine_count);
  return calib;
}

ErrorRates fnmr_fmr(std::span<const ScoredLabel> scores, double threshold) {
  std::size_t genuine = 0, non_match = 0, imposter = 0, match = 0;
  for (const auto& s : scores) {
    const bool is_match = s.score >= threshold;
    if (s.label == Label::Genuine) {
      ++genuine;
      if (!is_match) ++non_match;
    } else {
      ++imposter;
      if (is_match) ++match;
    }
  }
  ErrorRates rates;
  if (genuine) rates.fnmr = static_cast<double>(non_match) / static_cast<double>(genuine);
  if (imposter) rates.fmr = static_cast<double>(match) / static_cast<double>(imposter);
  return rates;
}

namespace {

double rejection_value(const ComparisonResult& r, RejectionKey key) {
  std::optional<double> v;
  switch (key) {
    case RejectionKey::ScoreUncertainty: v = r.score_uncertainty; break;
    case RejectionKey::DecisionConfidence: v = r.decision_confidence; break;
    case RejectionKey::IntuitiveConfidence: v = r.intuitive_confidence; break;
    case RejectionKey::MinQuality: v = r.min_quality; break;
  }
  if (!v) {
    throw Error(ErrorCode::MissingKey, "result " + r.pair.probe_id + "/" + r.pair.reference_id +
                                           " has no " + std::string(to_string(key)));
  }
  return *v;
}

}  // namespace

std::vector<std::size_t> rejection_order(std::span<const ComparisonResult> results,
                                         RejectionKey key) {
  std::vector<double> value(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) value[i] = rejection_value(results[i], key);

  std::vector<std::size_t> order(results.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (key == RejectionKey::ScoreUncertainty) {
    // Highest uncertainty first.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] > value[b]; });
  } else {
    // Lowest confidence / quality first.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
  }
  return order;
}

ErcCurve erc(std::span<const ComparisonResult> results, RejectionKey key, const EvalConfig& cfg,
             const ThresholdCalibration& calib) {
  cfg.validate();
  if (results.empty()) throw Error(ErrorCode::EmptyInput, "ERC needs at least one result");
  const auto order = rejection_order(results, key);
  const std::size_t n = results.size();
  const double t = calib.threshold;

  // Suffix counts over the rejection order: entry k covers order[k..n).
  std::vector<std::size_t> genuine(n + 1, 0), non_match(n + 1, 0), imposter(n + 1, 0),
      match(n + 1, 0);
  for (std::size_t k = n; k-- > 0;) {
    const auto& r = results[order[k]];
    const bool is_match = r.score >= t;
    const bool is_genuine = r.pair.label == Label::Genuine;
    genuine[k] = genuine[k + 1] + (is_genuine ? 1 : 0);
    non_match[k] = non_match[k + 1] + (is_genuine && !is_match ? 1 : 0);
    imposter[k] = imposter[k + 1] + (is_genuine ? 0 : 1);
    match[k] = match[k + 1] + (!is_genuine && is_match ? 1 : 0);
  }

  ErcCurve curve;
  curve.rejection_key = key;
  curve.threshold = t;
  const std::size_t last = cfg.erc_steps - 1;
  for (std::size_t step = 0; step <= last; ++step) {
    const double fraction = static_cast<double>(step) / static_cast<double>(last);
    if (fraction > cfg.max_reject_fraction + 1e-12) break;
    // floor(fraction * n) evaluated exactly in integers.
    const std::size_t drop = step * n / last;
    if (genuine[drop] == 0) {
      curve.terminated_at = fraction;
      break;
    }
    ErcPoint p;
    p.reject_fraction = fraction;
    p.fnmr = static_cast<double>(non_match[drop]) / static_cast<double>(genuine[drop]);
    if (imposter[drop]) {
      p.fmr = static_cast<double>(match[drop]) / static_cast<double>(imposter[drop]);
    }
    curve.points.push_back(p);
  }
  return curve;
}

double erc_auc(const ErcCurve& curve) {
  const auto& p = curve.points;
  if (p.size() < 2) throw Error(ErrorCode::TooFewPoints, "ERC area needs at least 2 points");
  double area = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    area += 0.5 * (p[i].fnmr + p[i - 1].fnmr) * (p[i].reject_fraction - p[i - 1].reject_fraction);
  }
  return area;
}

}  // namespace pfe
