#pragma once
// Synthetic probabilistic embeddings with controllable identity
// separability, heteroscedastic uncertainty and quality labels.
//
// Identity centers are uniform on the unit sphere. Each image gets a latent
// uncertainty level u in (0, 1) which sets its sigma magnitude
// (sigma_low + u * (sigma_high - sigma_low)), and, through a Gaussian copula
// with correlation quality_coupling, its quality. With heteroscedastic_spread
// the image's deviation from its identity center scales with 2u, so images
// that claim more uncertainty really are noisier.

#include <cstdint>
#include <vector>

#include "pfe/estimate.hpp"
#include "pfe/types.hpp"

namespace pfe {

struct SynthConfig {
  std::size_t n_subjects = 200;
  std::size_t images_per_subject = 5;
  std::size_t dimension = 512;
  // Angular std of an image mean around its identity center (radians, small
  // angle): per-dimension Gaussian std is intra_class_spread / sqrt(d).
  double intra_class_spread = 0.5;
  double sigma_low = 0.01;
  double sigma_high = 0.05;
  double quality_coupling = -0.9;
  double cross_quality_fraction = 0.0;
  bool heteroscedastic_spread = true;
  std::uint64_t rng_seed = 0;
  // When set, also emit samples_per_image stochastic samples per image,
  // mean + sigma * N(0, 1) per dimension (not renormalized).
  bool emit_samples = false;
  std::size_t samples_per_image = 100;

  void validate() const;
};

struct SynthData {
  std::vector<ProbabilisticEmbedding> embeddings;
  std::vector<StochasticSampleSet> samples;
};

SynthData generate(const SynthConfig& cfg);

}  // namespace pfe
