// pfe: command-line pipeline for probabilistic face embedding evaluation.
//
//   pfe synth      -> embedding set (+ optional stochastic samples)
//   pfe estimate   -> embedding set from stochastic samples
//   pfe pairs      -> genuine + random imposter pairs
//   pfe calibrate  -> decision threshold at a fixed FMR
//   pfe score      -> per-pair score, uncertainty, decision and confidences
//   pfe erc        -> error-versus-reject curves
//   pfe heatmap    -> (score, decision confidence) histogram
//
// Errors are reported on stderr as a single line:
//   error code=<ErrorCode> message="<text>"

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pfe/decision.hpp"
#include "pfe/estimate.hpp"
#include "pfe/evaluate.hpp"
#include "pfe/io.hpp"
#include "pfe/oracle.hpp"
#include "pfe/scoring.hpp"
#include "pfe/synth.hpp"

namespace {

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
    if (c == '"') c = '\'';
  }
  return text;
}

int report(std::string_view code, const std::string& message, int status) {
  std::cerr << "error code=" << code << " message=\"" << one_line(message) << "\"\n";
  return status;
}

struct SynthArgs {
  pfe::SynthConfig cfg;
  std::string out;
  std::string samples_out;
};

struct EstimateArgs {
  std::string samples;
  std::string out;
  bool no_normalize = false;
};

struct PairsArgs {
  std::string set;
  std::string out;
  std::size_t imposters = 30;
  std::uint64_t seed = 0;
  bool dedup = false;
};

struct CalibrateArgs {
  std::string set;
  std::string pairs;
  std::string out;
  double fmr_target = 0.001;
};

struct ScoreArgs {
  std::string set;
  std::string pairs;
  std::string calib;
  std::string out;
  std::string alpha = "5";
  bool no_clamp = false;
};

struct ErcArgs {
  std::string results;
  std::string out;
  std::string key = "all";
  std::size_t steps = 101;
  double max_reject = 0.95;
};

struct HeatmapArgs {
  std::string results;
  std::string out;
  std::size_t bins = 100;
  std::size_t score_bins = 0;
  std::size_t confidence_bins = 0;
  double score_min = -1.0;
  double score_max = 1.0;
};

struct OracleArgs {
  std::string set;
  std::string probe;
  std::string reference;
  std::size_t n = 100000;
  std::uint64_t seed = 0;
  std::string alpha = "5";
  double threshold = 0.0;
  bool renormalize = false;
};

void run_synth(const SynthArgs& a) {
  auto cfg = a.cfg;
  cfg.emit_samples = !a.samples_out.empty();
  const auto data = pfe::generate(cfg);
  pfe::io::write_embedding_set(a.out, data.embeddings);
  if (cfg.emit_samples) pfe::io::write_sample_sets(a.samples_out, data.samples);
}

void run_estimate(const EstimateArgs& a) {
  const auto sets = pfe::io::read_sample_sets(a.samples);
  pfe::EstimateOptions opts;
  opts.normalize_samples = !a.no_normalize;
  std::vector<pfe::ProbabilisticEmbedding> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back(pfe::estimate_uncertainty(s, opts));
  pfe::io::write_embedding_set(a.out, out);
}

void run_pairs(const PairsArgs& a) {
  const auto set = pfe::io::read_embedding_set(a.set);
  pfe::EvalConfig cfg;
  cfg.imposters_per_image = a.imposters;
  cfg.rng_seed = a.seed;
  cfg.dedup_imposters = a.dedup;
  pfe::io::write_pairs(a.out, pfe::build_pairs(set, cfg));
}

void run_calibrate(const CalibrateArgs& a) {
  const auto set = pfe::io::read_embedding_set(a.set);
  const auto pairs = pfe::io::read_pairs(a.pairs);
  const pfe::EmbeddingIndex index(set);
  const auto scores = pfe::score_pairs(index, pairs);
  const auto calib = pfe::calibrate_threshold(scores, a.fmr_target);
  pfe::io::write_calibration(a.out, calib);
  std::cout << "threshold=" << pfe::io::format_real(calib.threshold)
            << " fmr=" << pfe::io::format_real(calib.achieved_fmr)
            << " fnmr=" << pfe::io::format_real(calib.achieved_fnmr) << '\n';
}

void run_score(const ScoreArgs& a) {
  const auto set = pfe::io::read_embedding_set(a.set);
  const auto pairs = pfe::io::read_pairs(a.pairs);
  const auto calib = pfe::io::read_calibration(a.calib);
  const pfe::ConfidenceParams params(pfe::parse_alpha(a.alpha), calib.threshold, !a.no_clamp);
  const pfe::EmbeddingIndex index(set);
  const auto results = pfe::assess_pairs(index, pairs, params);
  pfe::io::write_results(a.out, {params.threshold(), params.alpha(), params.clamp()}, results);
}

void run_erc(const ErcArgs& a) {
  const auto file = pfe::io::read_results(a.results);
  pfe::EvalConfig cfg;
  cfg.erc_steps = a.steps;
  cfg.max_reject_fraction = a.max_reject;
  pfe::ThresholdCalibration calib;
  calib.threshold = file.meta.threshold;
  std::vector<pfe::ErcCurve> curves;
  if (a.key == "all") {
    for (auto key : pfe::kAllRejectionKeys) curves.push_back(pfe::erc(file.results, key, cfg, calib));
  } else {
    curves.push_back(pfe::erc(file.results, pfe::parse_rejection_key(a.key), cfg, calib));
  }
  pfe::io::write_erc_curves(a.out, curves);
}

void run_heatmap(const HeatmapArgs& a) {
  const auto file = pfe::io::read_results(a.results);
  pfe::HeatmapSpec spec;
  spec.score_bins = a.score_bins ? a.score_bins : a.bins;
  spec.confidence_bins = a.confidence_bins ? a.confidence_bins : a.bins;
  spec.score_min = a.score_min;
  spec.score_max = a.score_max;
  const auto map = pfe::confidence_heatmap_data(file.results, spec, file.meta.threshold);
  pfe::io::write_heatmap(a.out, map);
}

void run_oracle(const OracleArgs& a) {
  const auto set = pfe::io::read_embedding_set(a.set);
  const pfe::EmbeddingIndex index(set);
  const auto& x = index.at(a.probe);
  const auto& y = index.at(a.reference);
  const pfe::ConfidenceParams params(pfe::parse_alpha(a.alpha), a.threshold, false);
  pfe::oracle::McOptions opts;
  opts.renormalize = a.renormalize;
  const double analytic_score = pfe::score_uncertainty(x, y);
  const double analytic_conf = 1.0 - pfe::decision_confidence(x, y, params);
  const double mc_score = pfe::oracle::mc_score_std(x, y, a.n, a.seed, opts);
  const double mc_conf = pfe::oracle::mc_decision_confidence_std(x, y, params, a.n, a.seed, opts);
  using pfe::io::format_real;
  std::cout << "score=" << format_real(pfe::cosine_similarity(x, y))
            << " score_uncertainty=" << format_real(analytic_score)
            << " mc_score_std=" << format_real(mc_score)
            << " one_minus_confidence=" << format_real(analytic_conf)
            << " mc_decision_std=" << format_real(mc_conf) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Score uncertainty and decision confidence for probabilistic face embeddings"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic embedding set");
  s->add_option("--subjects", synth.cfg.n_subjects, "Number of identities")->capture_default_str();
  s->add_option("--images-per-subject", synth.cfg.images_per_subject)->capture_default_str();
  s->add_option("--dim", synth.cfg.dimension, "Feature dimension")->capture_default_str();
  s->add_option("--intra-spread", synth.cfg.intra_class_spread)->capture_default_str();
  s->add_option("--sigma-low", synth.cfg.sigma_low)->capture_default_str();
  s->add_option("--sigma-high", synth.cfg.sigma_high)->capture_default_str();
  s->add_option("--quality-coupling", synth.cfg.quality_coupling)->capture_default_str();
  s->add_option("--cross-quality-fraction", synth.cfg.cross_quality_fraction)
      ->capture_default_str();
  s->add_flag("!--homoscedastic-spread", synth.cfg.heteroscedastic_spread,
              "Same center deviation for every image regardless of its uncertainty");
  s->add_option("--seed", synth.cfg.rng_seed)->capture_default_str();
  s->add_option("--samples-out", synth.samples_out, "Also write stochastic samples (.psmp)");
  s->add_option("--samples-per-image", synth.cfg.samples_per_image)->capture_default_str();
  s->add_option("-o,--out", synth.out, "Output embedding set (.pemb)")->required();

  EstimateArgs estimate;
  auto* e = app.add_subcommand("estimate", "Estimate embedding uncertainty from samples");
  e->add_option("--samples", estimate.samples, "Sample set file (.psmp)")->required();
  e->add_flag("--no-normalize-samples", estimate.no_normalize);
  e->add_option("-o,--out", estimate.out)->required();

  PairsArgs pairs;
  auto* p = app.add_subcommand("pairs", "Build genuine and random imposter pairs");
  p->add_option("--set", pairs.set)->required();
  p->add_option("--imposters-per-image", pairs.imposters)->capture_default_str();
  p->add_option("--seed", pairs.seed)->capture_default_str();
  p->add_flag("--dedup", pairs.dedup, "Drop imposter pairs drawn from both sides");
  p->add_option("-o,--out", pairs.out)->required();

  CalibrateArgs calibrate;
  auto* c = app.add_subcommand("calibrate", "Calibrate the decision threshold at a fixed FMR");
  c->add_option("--set", calibrate.set)->required();
  c->add_option("--pairs", calibrate.pairs)->required();
  c->add_option("--fmr-target", calibrate.fmr_target)->capture_default_str();
  c->add_option("-o,--out", calibrate.out)->required();

  ScoreArgs score;
  auto* sc = app.add_subcommand("score", "Score pairs with uncertainty and confidence");
  sc->add_option("--set", score.set)->required();
  sc->add_option("--pairs", score.pairs)->required();
  sc->add_option("--calib", score.calib)->required();
  sc->add_option("--alpha", score.alpha,
                 "Sigmoid sharpness: a number or arcface (2), magface (5), curricularface (5)")
      ->capture_default_str();
  sc->add_flag("--no-clamp", score.no_clamp, "Do not clamp decision confidence to [0, 1]");
  sc->add_option("-o,--out", score.out)->required();

  ErcArgs erc;
  auto* r = app.add_subcommand("erc", "Error-versus-reject curves");
  r->add_option("--results", erc.results)->required();
  r->add_option("--key", erc.key,
                "score-uncertainty, decision-confidence, intuitive-confidence, min-quality or all")
      ->capture_default_str();
  r->add_option("--steps", erc.steps)->capture_default_str();
  r->add_option("--max-reject", erc.max_reject)->capture_default_str();
  r->add_option("-o,--out", erc.out)->required();

  HeatmapArgs heat;
  auto* h = app.add_subcommand("heatmap", "Score/confidence histogram");
  h->add_option("--results", heat.results)->required();
  h->add_option("--bins", heat.bins, "Bins per axis")->capture_default_str();
  h->add_option("--score-bins", heat.score_bins);
  h->add_option("--confidence-bins", heat.confidence_bins);
  h->add_option("--score-min", heat.score_min)->capture_default_str();
  h->add_option("--score-max", heat.score_max)->capture_default_str();
  h->add_option("-o,--out", heat.out)->required();

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "Monte-Carlo check of the analytic formulas");
  o->group("");
  o->add_option("--set", oracle.set)->required();
  o->add_option("--probe", oracle.probe)->required();
  o->add_option("--reference", oracle.reference)->required();
  o->add_option("--n", oracle.n)->capture_default_str();
  o->add_option("--seed", oracle.seed)->capture_default_str();
  o->add_option("--alpha", oracle.alpha)->capture_default_str();
  o->add_option("--threshold", oracle.threshold)->capture_default_str();
  o->add_flag("--renormalize", oracle.renormalize);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    return report("UsageError", ex.what(), 2);
  }

  try {
    if (*s) run_synth(synth);
    else if (*e) run_estimate(estimate);
    else if (*p) run_pairs(pairs);
    else if (*c) run_calibrate(calibrate);
    else if (*sc) run_score(score);
    else if (*r) run_erc(erc);
    else if (*h) run_heatmap(heat);
    else if (*o) run_oracle(oracle);
  } catch (const pfe::Error& ex) {
    return report(pfe::to_string(ex.code()), ex.what(), 1);
  } catch (const std::exception& ex) {
    return report("InternalError", ex.what(), 1);
  }
  return 0;
}
