#include "pfe/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "pfe/detail/parallel.hpp"

namespace pfe {

void SynthConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (n_subjects < 2) fail("n_subjects must be >= 2");
  if (images_per_subject < 1) fail("images_per_subject must be >= 1");
  if (dimension < 2) fail("dimension must be >= 2");
  if (!(intra_class_spread >= 0.0) || !std::isfinite(intra_class_spread)) {
    fail("intra_class_spread must be finite and >= 0");
  }
  if (!(sigma_low >= 0.0 && sigma_low <= sigma_high) || !std::isfinite(sigma_high)) {
    fail("need 0 <= sigma_low <= sigma_high");
  }
  if (!(quality_coupling >= -1.0 && quality_coupling <= 1.0)) {
    fail("quality_coupling must lie in [-1, 1]");
  }
  if (!(cross_quality_fraction >= 0.0 && cross_quality_fraction <= 1.0)) {
    fail("cross_quality_fraction must lie in [0, 1]");
  }
  if (emit_samples && samples_per_image < 2) fail("samples_per_image must be >= 2");
}

namespace {

enum Stream : std::uint32_t { kEmbeddings = 1, kSamples = 2 };

std::mt19937_64 subject_stream(std::uint64_t seed, std::size_t subject, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(subject), static_cast<std::uint32_t>(subject >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::string subject_name(std::size_t s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%05zu", s);
  return buf;
}

std::string image_name(std::size_t s, std::size_t i) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "s%05zu_i%03zu", s, i);
  return buf;
}

}  // namespace

SynthData generate(const SynthConfig& cfg) {
  cfg.validate();
  const std::size_t d = cfg.dimension;
  const std::size_t per = cfg.images_per_subject;
  const double per_dim_spread = cfg.intra_class_spread / std::sqrt(static_cast<double>(d));
  const double c = cfg.quality_coupling;
  const double c_rest = std::sqrt(std::max(0.0, 1.0 - c * c));

  std::vector<std::optional<ProbabilisticEmbedding>> slots(cfg.n_subjects * per);
  std::vector<StochasticSampleSet> sample_slots(cfg.emit_samples ? slots.size() : 0);

  detail::parallel_for(cfg.n_subjects, [&](std::size_t s) {
    auto rng = subject_stream(cfg.rng_seed, s, kEmbeddings);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    std::vector<double> center(d);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (double& v : center) {
        v = normal(rng);
        norm += v * v;
      }
      norm = std::sqrt(norm);
    } while (norm == 0.0);
    for (double& v : center) v /= norm;

    const std::string subject = subject_name(s);
    for (std::size_t i = 0; i < per; ++i) {
      double z_uncertainty = normal(rng);
      const double z_noise = normal(rng);
      if (uniform(rng) < cfg.cross_quality_fraction) {
        // Forced into the degraded regime: upper tail of the uncertainty latent.
        z_uncertainty = 1.5 + std::abs(z_uncertainty);
      }
      const double u = normal_cdf(z_uncertainty);
      const double quality = normal_cdf(c * z_uncertainty + c_rest * z_noise);
      const double magnitude = cfg.sigma_low + u * (cfg.sigma_high - cfg.sigma_low);

      std::vector<double> sigma(d);
      for (double& v : sigma) {
        v = std::clamp(magnitude * (0.5 + uniform(rng)), cfg.sigma_low, cfg.sigma_high);
      }

      const double spread = cfg.heteroscedastic_spread ? per_dim_spread * 2.0 * u : per_dim_spread;
      // Gaussian step in the tangent space at the center, then back to the sphere.
      std::vector<double> step(d);
      double radial = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        step[j] = normal(rng);
        radial += step[j] * center[j];
      }
      std::vector<double> mean(center);
      for (std::size_t j = 0; j < d; ++j) mean[j] += spread * (step[j] - radial * center[j]);
      double mean_norm = 0.0;
      for (double v : mean) mean_norm += v * v;
      mean_norm = std::sqrt(mean_norm);
      for (double& v : mean) v /= mean_norm;

      // The mean is already unit length, so validation leaves sigma as drawn.
      slots[s * per + i] = validate_embedding(FeatureVector(std::move(mean)),
                                              FeatureVector(std::move(sigma)),
                                              image_name(s, i), subject, quality);
    }

    if (cfg.emit_samples) {
      auto sample_rng = subject_stream(cfg.rng_seed, s, kSamples);
      for (std::size_t i = 0; i < per; ++i) {
        const auto& e = *slots[s * per + i];
        StochasticSampleSet set;
        set.image_id = e.image_id();
        set.subject_id = e.subject_id();
        set.deterministic = e.mean();
        set.quality = e.quality();
        set.samples.reserve(cfg.samples_per_image);
        std::vector<double> v(d);
        for (std::size_t k = 0; k < cfg.samples_per_image; ++k) {
          for (std::size_t j = 0; j < d; ++j) {
            v[j] = e.mean()[j] + e.sigma()[j] * normal(sample_rng);
          }
          set.samples.emplace_back(v);
        }
        sample_slots[s * per + i] = std::move(set);
      }
    }
  });

  SynthData out;
  out.embeddings.reserve(slots.size());
  for (auto& e : slots) out.embeddings.push_back(std::move(*e));
  out.samples = std::move(sample_slots);
  return out;
}

}  // namespace pfe
