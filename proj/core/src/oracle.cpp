#include "pfe/oracle.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "pfe/detail/parallel.hpp"

namespace pfe::oracle {

namespace {

struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    count += 1.0;
    const double delta = v - mean;
    mean += delta / count;
    m2 += delta * (v - mean);
  }

  // Chan et al. pairwise merge.
  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    const double total = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / total;
    m2 += o.m2 + delta * delta * count * o.count / total;
    count = total;
  }
};

template <class Transform>
double mc_std(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y,
              std::size_t n_samples, std::uint64_t seed, const McOptions& options,
              Transform transform) {
  if (n_samples < kMinSamples) {
    throw Error(ErrorCode::TooFewSamples, "Monte-Carlo oracle needs at least 1000 samples");
  }
  if (x.dimension() != y.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "oracle inputs differ in dimension");
  }
  const std::size_t d = x.dimension();
  const std::size_t batch = options.batch_size ? options.batch_size : 4096;
  const std::size_t batches = (n_samples + batch - 1) / batch;
  std::vector<Moments> partial(batches);

  detail::parallel_for(
      batches,
      [&](std::size_t b) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> xs(d), ys(d);
        const std::size_t begin = b * batch;
        const std::size_t end = std::min(n_samples, begin + batch);
        Moments m;
        for (std::size_t k = begin; k < end; ++k) {
          for (std::size_t i = 0; i < d; ++i) {
            const double sx = x.sigma()[i];
            const double sy = y.sigma()[i];
            xs[i] = x.mean()[i] + (sx > 0.0 ? sx * normal(rng) : 0.0);
            ys[i] = y.mean()[i] + (sy > 0.0 ? sy * normal(rng) : 0.0);
          }
          double dot = 0.0;
          for (std::size_t i = 0; i < d; ++i) dot += xs[i] * ys[i];
          if (options.renormalize) {
            double nx = 0.0, ny = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
              nx += xs[i] * xs[i];
              ny += ys[i] * ys[i];
            }
            dot /= std::sqrt(nx * ny);
          }
          m.add(transform(dot));
        }
        partial[b] = m;
      },
      options.threads);

  Moments total;
  for (const auto& m : partial) total.merge(m);
  return std::sqrt(total.m2 / total.count);
}

}  // namespace

double mc_score_std(const ProbabilisticEmbedding& x, const ProbabilisticEmbedding& y,
                    std::size_t n_samples, std::uint64_t seed, const McOptions& options) {
  return mc_std(x, y, n_samples, seed, options, [](double s) { return s; });
}

double mc_decision_confidence_std(const ProbabilisticEmbedding& x,
                                  const ProbabilisticEmbedding& y, const ConfidenceParams& params,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const McOptions& options) {
  const double alpha = params.alpha();
  const double d = params.threshold();
  return mc_std(x, y, n_samples, seed, options,
                [alpha, d](double s) { return 1.0 / (1.0 + std::exp(-alpha * (s - d))); });
}

}  // namespace pfe::oracle
