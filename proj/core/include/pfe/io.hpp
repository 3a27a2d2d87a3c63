#pragma once
// Text file formats. Every file starts with a one-line version header
// ("#<kind> v1 key=value ..."), followed by a CSV column header and data rows.
// Reals are written with 17 significant digits so write -> read is lossless.
//
//   embedding set (.pemb)  #pemb v1 dim=D has_quality=0|1 has_sigma=0|1
//                          image_id,subject_id[,quality],mu_1..mu_D[,sigma_1..sigma_D]
//   sample set (.psmp)     #psmp v1 dim=D t=T has_quality=0|1
//                          image_id,subject_id,quality,kind,v_1..v_D
//                          one "deterministic" row then T "sample" rows per image
//   pairs                  #pfe-pairs v1
//                          probe_id,reference_id,label
//   results                #pfe-results v1 threshold=.. alpha=.. clamp=0|1
//                          probe_id,reference_id,label,score,score_uncertainty,decision,
//                          decision_confidence,intuitive_confidence,min_quality
//   ERC curves             #pfe-erc v1 threshold=..
//                          key,reject_fraction,fnmr,fmr
//                          a final row with fnmr=NA marks early termination
//   heatmap                #pfe-heatmap v1 threshold=.. score_bins=.. ...
//                          score_bin,confidence_bin,score_lo,score_hi,confidence_lo,
//                          confidence_hi,genuine,imposter,total
//   calibration (JSON)     {"format":"pfe-calibration","version":1,"threshold":..,...}
//
// Absent optional values are written as empty fields; undefined rates as "NA".

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfe/decision.hpp"
#include "pfe/estimate.hpp"
#include "pfe/types.hpp"

namespace pfe::io {

inline constexpr int kFormatVersion = 1;

std::string format_real(double value);

// Embedding sets. has_sigma=0 files read back with zero sigma.
void write_embedding_set(std::ostream& out, std::span<const ProbabilisticEmbedding> set);
std::vector<ProbabilisticEmbedding> read_embedding_set(std::istream& in,
                                                       const std::string& source = "<stream>");
void write_embedding_set(const std::filesystem::path& path,
                         std::span<const ProbabilisticEmbedding> set);
std::vector<ProbabilisticEmbedding> read_embedding_set(const std::filesystem::path& path);

void write_sample_sets(std::ostream& out, std::span<const StochasticSampleSet> sets);
std::vector<StochasticSampleSet> read_sample_sets(std::istream& in,
                                                  const std::string& source = "<stream>");
void write_sample_sets(const std::filesystem::path& path, std::span<const StochasticSampleSet> sets);
std::vector<StochasticSampleSet> read_sample_sets(const std::filesystem::path& path);

void write_pairs(std::ostream& out, const PairSet& pairs);
PairSet read_pairs(std::istream& in, const std::string& source = "<stream>");
void write_pairs(const std::filesystem::path& path, const PairSet& pairs);
PairSet read_pairs(const std::filesystem::path& path);

struct ResultsMeta {
  double threshold = 0.0;
  double alpha = 0.0;
  bool clamp = true;

  friend bool operator==(const ResultsMeta&, const ResultsMeta&) = default;
};

struct ResultsFile {
  ResultsMeta meta;
  std::vector<ComparisonResult> results;
};

void write_results(std::ostream& out, const ResultsMeta& meta,
                   std::span<const ComparisonResult> results);
ResultsFile read_results(std::istream& in, const std::string& source = "<stream>");
void write_results(const std::filesystem::path& path, const ResultsMeta& meta,
                   std::span<const ComparisonResult> results);
ResultsFile read_results(const std::filesystem::path& path);

void write_calibration(std::ostream& out, const ThresholdCalibration& calib);
ThresholdCalibration read_calibration(std::istream& in, const std::string& source = "<stream>");
void write_calibration(const std::filesystem::path& path, const ThresholdCalibration& calib);
ThresholdCalibration read_calibration(const std::filesystem::path& path);

// All curves must share one threshold.
void write_erc_curves(std::ostream& out, std::span<const ErcCurve> curves);
std::vector<ErcCurve> read_erc_curves(std::istream& in, const std::string& source = "<stream>");
void write_erc_curves(const std::filesystem::path& path, std::span<const ErcCurve> curves);
std::vector<ErcCurve> read_erc_curves(const std::filesystem::path& path);

void write_heatmap(std::ostream& out, const Heatmap& map);
void write_heatmap(const std::filesystem::path& path, const Heatmap& map);

}  // namespace pfe::io
