// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Usage: pfe_acceptance [path-to-pfe-cli]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "pfe/decision.hpp"
#include "pfe/estimate.hpp"
#include "pfe/evaluate.hpp"
#include "pfe/io.hpp"
#include "pfe/oracle.hpp"
#include "pfe/scoring.hpp"
#include "pfe/synth.hpp"

using namespace pfe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ProbabilisticEmbedding random_embedding(std::mt19937_64& rng, std::size_t d, double sigma_max,
                                        std::string id) {
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
  return validate_embedding(FeatureVector(std::move(mean)), FeatureVector(std::move(sigma)),
                            std::move(id), "s");
}

// Fixture shared by criteria 6-8: 200 subjects x 5 images, d = 128.
struct Fixture {
  std::vector<ProbabilisticEmbedding> set;
  PairSet pairs;
  ThresholdCalibration calib;
};

Fixture make_fixture(const SynthConfig& cfg) {
  Fixture f;
  f.set = generate(cfg).embeddings;
  EvalConfig ecfg;
  ecfg.rng_seed = cfg.rng_seed;
  f.pairs = build_pairs(f.set, ecfg);
  const EmbeddingIndex index(f.set);
  f.calib = calibrate_threshold(score_pairs(index, f.pairs), ecfg.fmr_target);
  return f;
}

SynthConfig base_fixture() {
  SynthConfig cfg;
  cfg.n_subjects = 200;
  cfg.images_per_subject = 5;
  cfg.dimension = 128;
  cfg.rng_seed = 7;
  return cfg;
}

// Sigma magnitude drawn independently of quality and of the identity
// geometry, so the score alone does not reveal which comparisons are noisy.
SynthConfig confidence_fixture() {
  auto cfg = base_fixture();
  cfg.intra_class_spread = 1.2;
  cfg.sigma_low = 0.01;
  cfg.sigma_high = 0.05;
  cfg.quality_coupling = 0.0;
  return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto x = random_embedding(rng, 128, 0.05, "x");
    const auto y = random_embedding(rng, 128, 0.05, "y");
    const double analytic = score_uncertainty(x, y);
    const double mc = oracle::mc_score_std(x, y, 100000, 1000 + i);
    worst = std::max(worst, std::abs(analytic - mc) / mc);
  }
  const double t = seconds_since(start);
  return {worst <= 0.05 && t <= 120.0, fmt("max rel err %.4f (tol 0.05), %.1fs (limit 120s)", worst, t)};
}

Outcome criterion2() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> offset(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, kAlphaSweep.size() - 1);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto x = random_embedding(rng, 128, 0.02, "x");
    const auto y = random_embedding(rng, 128, 0.02, "y");
    const double alpha = kAlphaSweep[pick(rng)];
    const double s = cosine_similarity(x, y);
    const ConfidenceParams params(alpha, s + offset(rng) * 2.0 / alpha, false);
    const double analytic = 1.0 - decision_confidence(x, y, params);
    const double mc = oracle::mc_decision_confidence_std(x, y, params, 100000, 2000 + i);
    worst = std::max(worst, std::abs(analytic - mc) / mc);
  }
  const double t = seconds_since(start);
  return {worst <= 0.10 && t <= 120.0, fmt("max rel err %.4f (tol 0.10), %.1fs (limit 120s)", worst, t)};
}

Outcome criterion3() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> dim(2, 512);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = dim(rng);
    const auto x = random_embedding(rng, d, 0.1, "x");
    const auto y = random_embedding(rng, d, 0.1, "y");
    const ConfidenceParams params(kAlphaSweep[i % kAlphaSweep.size()], u(rng), false);
    const double s = cosine_similarity(x, y);
    const double delta = sigmoid_decision(s, params);
    const double closed = 1.0 - params.alpha() * delta * (1.0 - delta) * score_uncertainty(x, y);
    worst = std::max(worst, std::abs(closed - decision_confidence(x, y, params)));
  }
  return {worst <= 1e-12, fmt("max abs diff %.3g (tol 1e-12)", worst)};
}

// Brute-force FMR: share of imposter scores at or above t.
double brute_fmr(const std::vector<ScoredLabel>& scores, double t) {
  std::size_t n = 0, m = 0;
  for (const auto& s : scores) {
    if (s.label != Label::Imposter) continue;
    ++n;
    if (s.score >= t) ++m;
  }
  return static_cast<double>(m) / static_cast<double>(n);
}

Outcome criterion4() {
  std::mt19937_64 rng(404);
  const double targets[] = {0.001, 0.01, 0.05, 0.1, 0.25, 0.5};
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    std::uniform_int_distribution<int> size(1, 400);
    const int n_imp = size(rng);
    const int n_gen = size(rng);
    // Every third set is coarsely quantised to force ties.
    const double grid = i % 3 == 0 ? 0.05 : 0.0;
    std::normal_distribution<double> imp(0.0, 0.2), gen(0.6, 0.2);
    std::vector<ScoredLabel> scores;
    auto q = [&](double v) { return grid > 0 ? std::round(v / grid) * grid : v; };
    for (int k = 0; k < n_imp; ++k) scores.push_back({q(imp(rng)), Label::Imposter});
    for (int k = 0; k < n_gen; ++k) scores.push_back({q(gen(rng)), Label::Genuine});
    std::shuffle(scores.begin(), scores.end(), rng);
    const double target = targets[i % std::size(targets)];

    const auto calib = calibrate_threshold(scores, target);
    bool ok = brute_fmr(scores, calib.threshold) <= target &&
              calib.achieved_fmr == brute_fmr(scores, calib.threshold);
    // Next lower observed imposter score.
    double next = -std::numeric_limits<double>::infinity();
    for (const auto& s : scores) {
      if (s.label == Label::Imposter && s.score < calib.threshold) next = std::max(next, s.score);
    }
    if (std::isfinite(next)) ok = ok && brute_fmr(scores, next) > target;
    if (!ok) ++failures;
  }
  return {failures == 0, fmt("%d of 1000 score sets violated", failures)};
}

double key_value(const ComparisonResult& r, RejectionKey key) {
  switch (key) {
    case RejectionKey::ScoreUncertainty: return -r.score_uncertainty;
    case RejectionKey::DecisionConfidence: return *r.decision_confidence;
    case RejectionKey::IntuitiveConfidence: return *r.intuitive_confidence;
    case RejectionKey::MinQuality: return *r.min_quality;
  }
  return 0.0;
}

// From-scratch recomputation: sort, drop the prefix, count what is left.
bool erc_matches_brute_force(const std::vector<ComparisonResult>& results, RejectionKey key,
                             const EvalConfig& cfg, double threshold) {
  const ThresholdCalibration calib{threshold, cfg.fmr_target, 0.0, 0.0};
  const auto curve = erc(results, key, cfg, calib);
  const std::size_t n = results.size();
  const std::size_t last = cfg.erc_steps - 1;
  std::size_t point = 0;
  for (std::size_t step = 0; step <= last; ++step) {
    const double r = static_cast<double>(step) / static_cast<double>(last);
    if (r > cfg.max_reject_fraction + 1e-12) break;
    std::vector<ComparisonResult> kept = results;
    std::stable_sort(kept.begin(), kept.end(), [&](const auto& a, const auto& b) {
      return key_value(a, key) < key_value(b, key);
    });
    kept.erase(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(step * n / last));
    int gen = 0, fnm = 0, imp = 0, fm = 0;
    for (const auto& c : kept) {
      const bool match = c.score >= threshold;
      if (c.pair.label == Label::Genuine) {
        ++gen;
        fnm += match ? 0 : 1;
      } else {
        ++imp;
        fm += match ? 1 : 0;
      }
    }
    if (gen == 0) {
      return point == curve.points.size() && curve.terminated_at == r;
    }
    if (point >= curve.points.size()) return false;
    const auto& p = curve.points[point++];
    if (p.reject_fraction != r || p.fnmr != static_cast<double>(fnm) / gen) return false;
    const std::optional<double> fmr =
        imp ? std::optional<double>(static_cast<double>(fm) / imp) : std::nullopt;
    if (p.fmr != fmr) return false;
  }
  return point == curve.points.size() && !curve.terminated_at;
}

Outcome criterion5() {
  std::mt19937_64 rng(505);
  std::uniform_int_distribution<std::size_t> size(1, 200);
  std::uniform_int_distribution<std::size_t> steps(2, 120);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0, failures = 0;
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = size(rng);
    std::vector<ComparisonResult> results(n);
    const bool coarse = i % 2 == 0;  // ties in the keys
    auto value = [&](double lo, double hi) {
      const double v = lo + (hi - lo) * u(rng);
      return coarse ? std::round(v * 4) / 4 : v;
    };
    for (std::size_t k = 0; k < n; ++k) {
      auto& r = results[k];
      r.pair = {"p" + std::to_string(k), "r" + std::to_string(k),
                u(rng) < 0.4 ? Label::Genuine : Label::Imposter};
      r.score = value(-1.0, 1.0);
      r.score_uncertainty = value(0.0, 0.1);
      r.decision_confidence = value(0.0, 1.0);
      r.intuitive_confidence = value(0.0, 1.0);
      r.min_quality = value(0.0, 1.0);
    }
    EvalConfig cfg;
    cfg.erc_steps = i % 3 == 0 ? 101 : steps(rng);
    cfg.max_reject_fraction = i % 4 == 0 ? 1.0 : 0.95;
    const double threshold = value(-0.5, 0.5);
    for (RejectionKey key : kAllRejectionKeys) {
      ++checked;
      if (!erc_matches_brute_force(results, key, cfg, threshold)) ++failures;
    }
  }
  return {failures == 0, fmt("%d of %d curves differ", failures, checked)};
}

Outcome criterion6() {
  const auto start = std::chrono::steady_clock::now();
  auto cfg = base_fixture();
  cfg.intra_class_spread = 1.0;
  cfg.sigma_low = 0.01;
  cfg.sigma_high = 0.1;
  cfg.quality_coupling = -0.9;
  const auto f = make_fixture(cfg);
  const EmbeddingIndex index(f.set);
  const auto results = assess_pairs(index, f.pairs, ConfidenceParams(kDefaultAlpha, f.calib.threshold));
  const auto curve = erc(results, RejectionKey::ScoreUncertainty, EvalConfig{}, f.calib);
  const double fnmr0 = curve.points.front().fnmr;
  const double auc = erc_auc(curve);
  const double t = seconds_since(start);
  return {auc < 0.95 * fnmr0 && t <= 60.0,
          fmt("auc %.5f vs 0.95*fnmr0 %.5f, %.1fs (limit 60s)", auc, 0.95 * fnmr0, t)};
}

Outcome criterion7(const Fixture& f) {
  const EmbeddingIndex index(f.set);
  const auto results = assess_pairs(index, f.pairs, ConfidenceParams(5.0, f.calib.threshold));
  const double dc = erc_auc(erc(results, RejectionKey::DecisionConfidence, EvalConfig{}, f.calib));
  const double ic = erc_auc(erc(results, RejectionKey::IntuitiveConfidence, EvalConfig{}, f.calib));
  return {dc < ic, fmt("decision-confidence auc %.5f, intuitive-confidence auc %.5f", dc, ic)};
}

// Score bins of width 0.1 centred on the threshold; bin 0 contains it.
Outcome criterion8(const Fixture& f) {
  const EmbeddingIndex index(f.set);
  const double d = f.calib.threshold;
  const double width = 0.1;
  std::string detail;
  bool all = true;
  for (double alpha : kAlphaSweep) {
    const auto results = assess_pairs(index, f.pairs, ConfidenceParams(alpha, d));
    std::map<long, std::pair<double, std::size_t>> bins;
    for (const auto& r : results) {
      const long k = static_cast<long>(std::floor((r.score - d) / width + 0.5));
      bins[k].first += *r.decision_confidence;
      ++bins[k].second;
    }
    long argmin = 0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [k, acc] : bins) {
      const double mean = acc.first / static_cast<double>(acc.second);
      if (mean < best) {
        best = mean;
        argmin = k;
      }
    }
    all = all && argmin == 0;
    detail += fmt("%sa=%g:bin%+ld", detail.empty() ? "" : " ", alpha, argmin);
  }
  return {all, "minimum bin offset per alpha (want +0): " + detail};
}

bool run(const std::string& command) { return std::system(command.c_str()) == 0; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs the whole CLI pipeline into dir and returns false on any failure.
bool cli_pipeline(const std::string& pfe, const fs::path& dir) {
  fs::create_directories(dir);
  const std::string q = "\"" + dir.string() + "/";
  const std::string quiet = " > /dev/null";
  return run(pfe + " synth --subjects 30 --images-per-subject 3 --dim 16 --seed 5 -o " + q +
             "set.pemb\" --samples-out " + q + "set.psmp\" --samples-per-image 20" + quiet) &&
         run(pfe + " estimate --samples " + q + "set.psmp\" -o " + q + "est.pemb\"" + quiet) &&
         run(pfe + " pairs --set " + q + "set.pemb\" --imposters-per-image 10 --seed 5 -o " + q +
             "pairs.csv\"" + quiet) &&
         run(pfe + " calibrate --set " + q + "set.pemb\" --pairs " + q + "pairs.csv\" --fmr-target 0.01 -o " +
             q + "calib.json\"" + quiet) &&
         run(pfe + " score --set " + q + "set.pemb\" --pairs " + q + "pairs.csv\" --calib " + q +
             "calib.json\" -o " + q + "results.csv\"" + quiet) &&
         run(pfe + " erc --results " + q + "results.csv\" -o " + q + "erc.csv\"" + quiet) &&
         run(pfe + " heatmap --results " + q + "results.csv\" --bins 20 -o " + q + "heat.csv\"" + quiet);
}

Outcome criterion9(const std::string& pfe) {
  // Sigma recovery from emitted samples.
  SynthConfig cfg;
  cfg.n_subjects = 10;
  cfg.images_per_subject = 2;
  cfg.dimension = 32;
  cfg.rng_seed = 9;
  cfg.emit_samples = true;
  cfg.samples_per_image = 10000;
  const auto data = generate(cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const auto est = estimate_uncertainty(data.samples[i], {false});
    const auto& truth = data.embeddings[i].sigma();
    for (std::size_t j = 0; j < truth.size(); ++j) {
      worst = std::max(worst, std::abs(est.sigma()[j] - truth[j]) / truth[j]);
    }
  }
  const bool sigma_ok = worst <= 0.05;

  // Lossless file round trips.
  auto fixture = make_fixture([] {
    auto c = confidence_fixture();
    c.n_subjects = 20;
    return c;
  }());
  const EmbeddingIndex index(fixture.set);
  const auto results = assess_pairs(index, fixture.pairs, ConfidenceParams(5.0, fixture.calib.threshold));
  std::vector<ErcCurve> curves;
  for (RejectionKey key : kAllRejectionKeys) curves.push_back(erc(results, key, EvalConfig{}, fixture.calib));
  bool lossless = true;
  {
    std::stringstream a, b, c, d, e;
    io::write_embedding_set(a, fixture.set);
    lossless = lossless && io::read_embedding_set(a) == fixture.set;
    io::write_pairs(b, fixture.pairs);
    lossless = lossless && io::read_pairs(b) == fixture.pairs;
    io::write_calibration(c, fixture.calib);
    lossless = lossless && io::read_calibration(c) == fixture.calib;
    io::write_results(d, {fixture.calib.threshold, 5.0, true}, results);
    lossless = lossless && io::read_results(d).results == results;
    io::write_erc_curves(e, curves);
    lossless = lossless && io::read_erc_curves(e) == curves;
    std::stringstream s;
    io::write_sample_sets(s, std::span(data.samples).first(2));
    const auto back = io::read_sample_sets(s);
    for (std::size_t i = 0; i < 2; ++i) {
      lossless = lossless && back[i].deterministic == data.samples[i].deterministic &&
                 back[i].samples == data.samples[i].samples;
    }
  }

  // CLI byte determinism: two full pipeline runs must produce identical files.
  bool deterministic = false;
  std::string cli = "cli not run";
  if (!pfe.empty()) {
    const fs::path root = fs::temp_directory_path() / ("pfe_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const bool ran = cli_pipeline(pfe, root / "a") && cli_pipeline(pfe, root / "b");
    std::size_t files = 0;
    deterministic = ran;
    if (ran) {
      for (const auto& entry : fs::directory_iterator(root / "a")) {
        ++files;
        deterministic = deterministic && slurp(entry.path()) == slurp(root / "b" / entry.path().filename());
      }
    }
    cli = ran ? fmt("%zu cli outputs %s", files, deterministic ? "identical" : "differ") : "cli run failed";
    fs::remove_all(root);
  }
  return {sigma_ok && lossless && deterministic,
          fmt("sigma max rel err %.4f (tol 0.05), files %s, ", worst, lossless ? "lossless" : "lossy") + cli};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string pfe = argc > 1 ? argv[1] : "";
  int failed = 0;
  auto report = [&](int id, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  };

  report(1, criterion1);
  report(2, criterion2);
  report(3, criterion3);
  report(4, criterion4);
  report(5, criterion5);
  report(6, criterion6);
  const auto fixture = make_fixture(confidence_fixture());
  report(7, [&] { return criterion7(fixture); });
  report(8, [&] { return criterion8(fixture); });
  report(9, [&] { return criterion9(pfe); });
  return failed == 0 ? 0 : 1;
}
