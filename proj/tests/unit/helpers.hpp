#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "pfe/types.hpp"

namespace pfe::test {

inline ProbabilisticEmbedding make(std::vector<double> mean, std::vector<double> sigma,
                                   std::string id = "a", std::string subject = "s",
                                   std::optional<double> quality = std::nullopt) {
  return validate_embedding(FeatureVector(std::move(mean)), FeatureVector(std::move(sigma)),
                            std::move(id), std::move(subject), quality);
}

// Uniform direction on the unit sphere, sigma entries uniform in [0, sigma_max].
inline ProbabilisticEmbedding random_embedding(std::mt19937_64& rng, std::size_t d,
                                               double sigma_max, std::string id = "r") {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, sigma_max);
  std::vector<double> mean(d), sigma(d);
  double norm = 0.0;
  for (auto& v : mean) {
    v = normal(rng);
    norm += v * v;
  }
  // Unit mean up front so sigma is not rescaled by validation.
  for (auto& v : mean) v /= std::sqrt(norm);
  for (auto& v : sigma) v = uniform(rng);
  return make(std::move(mean), std::move(sigma), std::move(id));
}

}  // namespace pfe::test
