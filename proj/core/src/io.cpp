#include "pfe/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace pfe::io {

namespace {

// Line-oriented reader that tracks line numbers for error messages.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  [[noreturn]] void fail(const std::string& what, ErrorCode code = ErrorCode::ParseError) const {
    throw Error(code, source_ + ":" + std::to_string(line_no_) + ": " + what);
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// "#kind v1 k=v ..." -> key/value map; checks kind and version.
std::map<std::string, std::string> read_header(LineReader& reader, std::string_view kind) {
  std::string line;
  if (!reader.next(line)) reader.fail("empty file", ErrorCode::HeaderMismatch);
  const auto tokens = split(line, ' ');
  if (tokens.size() < 2 || tokens[0] != "#" + std::string(kind)) {
    reader.fail("expected '#" + std::string(kind) + "' header", ErrorCode::HeaderMismatch);
  }
  if (tokens[1] != "v" + std::to_string(kFormatVersion)) {
    reader.fail("unsupported format version '" + std::string(tokens[1]) + "'",
                ErrorCode::HeaderMismatch);
  }
  std::map<std::string, std::string> kv;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    if (tokens[i].empty()) continue;
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos) {
      reader.fail("malformed header field '" + std::string(tokens[i]) + "'",
                  ErrorCode::HeaderMismatch);
    }
    kv.emplace(std::string(tokens[i].substr(0, eq)), std::string(tokens[i].substr(eq + 1)));
  }
  return kv;
}

void expect_columns(LineReader& reader, const std::string& expected) {
  std::string line;
  if (!reader.next(line)) reader.fail("missing column header", ErrorCode::HeaderMismatch);
  if (line != expected) {
    reader.fail("unexpected column header, want '" + expected + "'", ErrorCode::HeaderMismatch);
  }
}

double parse_real(std::string_view text, const LineReader& reader, std::string_view what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    reader.fail("invalid number '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

std::optional<double> parse_optional_real(std::string_view text, const LineReader& reader,
                                          std::string_view what) {
  if (text.empty() || text == "NA") return std::nullopt;
  return parse_real(text, reader, what);
}

std::size_t parse_count(const std::map<std::string, std::string>& kv, const std::string& key,
                        const LineReader& reader) {
  const auto it = kv.find(key);
  if (it == kv.end()) reader.fail("header lacks '" + key + "'", ErrorCode::HeaderMismatch);
  std::size_t value = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    reader.fail("header field '" + key + "' is not a count", ErrorCode::HeaderMismatch);
  }
  return value;
}

bool parse_flag(const std::map<std::string, std::string>& kv, const std::string& key,
                const LineReader& reader) {
  const auto it = kv.find(key);
  if (it == kv.end()) reader.fail("header lacks '" + key + "'", ErrorCode::HeaderMismatch);
  if (it->second == "1") return true;
  if (it->second == "0") return false;
  reader.fail("header flag '" + key + "' must be 0 or 1", ErrorCode::HeaderMismatch);
}

double header_real(const std::map<std::string, std::string>& kv, const std::string& key,
                   const LineReader& reader) {
  const auto it = kv.find(key);
  if (it == kv.end()) reader.fail("header lacks '" + key + "'", ErrorCode::HeaderMismatch);
  return parse_real(it->second, reader, key);
}

void check_id(const std::string& id) {
  if (id.empty() || id.find_first_of(",\n\r") != std::string::npos) {
    throw Error(ErrorCode::InvalidArgument,
                "id '" + id + "' is empty or contains a comma or newline");
  }
}

Label parse_label(std::string_view text, const LineReader& reader) {
  if (text == "genuine") return Label::Genuine;
  if (text == "imposter") return Label::Imposter;
  reader.fail("unknown label '" + std::string(text) + "'");
}

Decision parse_decision(std::string_view text, const LineReader& reader) {
  if (text == "match") return Decision::Match;
  if (text == "non-match") return Decision::NonMatch;
  reader.fail("unknown decision '" + std::string(text) + "'");
}

std::string optional_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return in;
}

void finish(std::ostream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

std::vector<double> parse_reals(const std::vector<std::string_view>& fields, std::size_t first,
                                std::size_t count, const LineReader& reader,
                                std::string_view what) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = parse_real(fields[first + i], reader, what);
  return out;
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Embedding sets

void write_embedding_set(std::ostream& out, std::span<const ProbabilisticEmbedding> set) {
  if (set.empty()) throw Error(ErrorCode::EmptyInput, "embedding set is empty");
  const std::size_t d = set.front().dimension();
  bool has_quality = true;
  for (const auto& e : set) {
    if (e.dimension() != d) throw Error(ErrorCode::DimensionMismatch, "mixed embedding dimensions");
    check_id(e.image_id());
    check_id(e.subject_id());
    has_quality = has_quality && e.quality().has_value();
  }
  out << "#pemb v" << kFormatVersion << " dim=" << d << " has_quality=" << (has_quality ? 1 : 0)
      << " has_sigma=1\n";
  out << "image_id,subject_id";
  if (has_quality) out << ",quality";
  for (std::size_t i = 1; i <= d; ++i) out << ",mu_" << i;
  for (std::size_t i = 1; i <= d; ++i) out << ",sigma_" << i;
  out << '\n';
  for (const auto& e : set) {
    out << e.image_id() << ',' << e.subject_id();
    if (has_quality) out << ',' << format_real(*e.quality());
    for (double v : e.mean()) out << ',' << format_real(v);
    for (double v : e.sigma()) out << ',' << format_real(v);
    out << '\n';
  }
}

std::vector<ProbabilisticEmbedding> read_embedding_set(std::istream& in,
                                                       const std::string& source) {
  LineReader reader(in, source);
  const auto kv = read_header(reader, "pemb");
  const std::size_t d = parse_count(kv, "dim", reader);
  const bool has_quality = parse_flag(kv, "has_quality", reader);
  const bool has_sigma = parse_flag(kv, "has_sigma", reader);
  if (d == 0) reader.fail("dimension must be >= 1", ErrorCode::HeaderMismatch);

  std::string columns = "image_id,subject_id";
  if (has_quality) columns += ",quality";
  for (std::size_t i = 1; i <= d; ++i) columns += ",mu_" + std::to_string(i);
  if (has_sigma) {
    for (std::size_t i = 1; i <= d; ++i) columns += ",sigma_" + std::to_string(i);
  }
  expect_columns(reader, columns);

  const std::size_t fixed = has_quality ? 3 : 2;
  const std::size_t width = fixed + d * (has_sigma ? 2 : 1);
  std::vector<ProbabilisticEmbedding> set;
  std::unordered_set<std::string> ids;
  std::string line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != width) {
      reader.fail("expected " + std::to_string(width) + " fields, found " +
                  std::to_string(f.size()));
    }
    std::string image_id(f[0]);
    if (image_id.empty()) reader.fail("empty image_id");
    if (!ids.insert(image_id).second) {
      reader.fail("duplicate image_id '" + image_id + "'", ErrorCode::DuplicateId);
    }
    std::optional<double> quality;
    if (has_quality) quality = parse_real(f[2], reader, "quality");
    auto mean = parse_reals(f, fixed, d, reader, "mu");
    auto sigma = has_sigma ? parse_reals(f, fixed + d, d, reader, "sigma") : std::vector<double>(d);
    try {
      set.push_back(validate_embedding(FeatureVector(std::move(mean)),
                                       FeatureVector(std::move(sigma)), std::move(image_id),
                                       std::string(f[1]), quality));
    } catch (const Error& e) {
      reader.fail(e.what(), e.code());
    }
  }
  return set;
}

void write_embedding_set(const std::filesystem::path& path,
                         std::span<const ProbabilisticEmbedding> set) {
  auto out = open_out(path);
  write_embedding_set(out, set);
  finish(out, path);
}

std::vector<ProbabilisticEmbedding> read_embedding_set(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_embedding_set(in, path.string());
}

// ---------------------------------------------------------------------------
// Stochastic sample sets

void write_sample_sets(std::ostream& out, std::span<const StochasticSampleSet> sets) {
  if (sets.empty()) throw Error(ErrorCode::EmptyInput, "sample file needs at least one image");
  const std::size_t d = sets.front().deterministic.size();
  const std::size_t t = sets.front().samples.size();
  bool has_quality = true;
  for (const auto& s : sets) {
    check_id(s.image_id);
    check_id(s.subject_id);
    if (s.deterministic.size() != d) {
      throw Error(ErrorCode::DimensionMismatch, "mixed sample dimensions");
    }
    if (s.samples.size() != t) {
      throw Error(ErrorCode::InvalidArgument, "every image needs the same number of samples");
    }
    for (const auto& v : s.samples) {
      if (v.size() != d) throw Error(ErrorCode::DimensionMismatch, "mixed sample dimensions");
    }
    has_quality = has_quality && s.quality.has_value();
  }
  out << "#psmp v" << kFormatVersion << " dim=" << d << " t=" << t
      << " has_quality=" << (has_quality ? 1 : 0) << '\n';
  out << "image_id,subject_id,quality,kind";
  for (std::size_t i = 1; i <= d; ++i) out << ",v_" << i;
  out << '\n';
  auto row = [&](const StochasticSampleSet& s, std::string_view kind, const FeatureVector& v) {
    out << s.image_id << ',' << s.subject_id << ','
        << (has_quality ? format_real(*s.quality) : std::string()) << ',' << kind;
    for (double x : v) out << ',' << format_real(x);
    out << '\n';
  };
  for (const auto& s : sets) {
    row(s, "deterministic", s.deterministic);
    for (const auto& v : s.samples) row(s, "sample", v);
  }
}

std::vector<StochasticSampleSet> read_sample_sets(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  const auto kv = read_header(reader, "psmp");
  const std::size_t d = parse_count(kv, "dim", reader);
  const std::size_t t = parse_count(kv, "t", reader);
  const bool has_quality = parse_flag(kv, "has_quality", reader);
  if (d == 0) reader.fail("dimension must be >= 1", ErrorCode::HeaderMismatch);
  std::string columns = "image_id,subject_id,quality,kind";
  for (std::size_t i = 1; i <= d; ++i) columns += ",v_" + std::to_string(i);
  expect_columns(reader, columns);

  std::vector<StochasticSampleSet> sets;
  std::unordered_set<std::string> ids;
  std::string line;
  auto check_complete = [&] {
    if (!sets.empty() && sets.back().samples.size() != t) {
      reader.fail("image '" + sets.back().image_id + "' has " +
                  std::to_string(sets.back().samples.size()) + " samples, header says " +
                  std::to_string(t));
    }
  };
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 4 + d) {
      reader.fail("expected " + std::to_string(4 + d) + " fields, found " +
                  std::to_string(f.size()));
    }
    auto values = parse_reals(f, 4, d, reader, "v");
    FeatureVector vec;
    try {
      vec = FeatureVector(std::move(values));
    } catch (const Error& e) {
      reader.fail(e.what(), e.code());
    }
    if (f[3] == "deterministic") {
      check_complete();
      StochasticSampleSet s;
      s.image_id = std::string(f[0]);
      s.subject_id = std::string(f[1]);
      if (!ids.insert(s.image_id).second) {
        reader.fail("duplicate image_id '" + s.image_id + "'", ErrorCode::DuplicateId);
      }
      if (has_quality) s.quality = parse_real(f[2], reader, "quality");
      s.deterministic = std::move(vec);
      s.samples.reserve(t);
      sets.push_back(std::move(s));
    } else if (f[3] == "sample") {
      if (sets.empty() || sets.back().image_id != f[0]) {
        reader.fail("sample row does not follow its image's deterministic row");
      }
      if (sets.back().samples.size() == t) reader.fail("too many sample rows for image");
      sets.back().samples.push_back(std::move(vec));
    } else {
      reader.fail("unknown row kind '" + std::string(f[3]) + "'");
    }
  }
  check_complete();
  return sets;
}

void write_sample_sets(const std::filesystem::path& path,
                       std::span<const StochasticSampleSet> sets) {
  auto out = open_out(path);
  write_sample_sets(out, sets);
  finish(out, path);
}

std::vector<StochasticSampleSet> read_sample_sets(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_sample_sets(in, path.string());
}

// ---------------------------------------------------------------------------
// Pairs

void write_pairs(std::ostream& out, const PairSet& pairs) {
  out << "#pfe-pairs v" << kFormatVersion << '\n';
  out << "probe_id,reference_id,label\n";
  for (const auto& p : pairs) {
    check_id(p.probe_id);
    check_id(p.reference_id);
    out << p.probe_id << ',' << p.reference_id << ',' << to_string(p.label) << '\n';
  }
}

PairSet read_pairs(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  read_header(reader, "pfe-pairs");
  expect_columns(reader, "probe_id,reference_id,label");
  PairSet pairs;
  std::string line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 3) reader.fail("expected 3 fields, found " + std::to_string(f.size()));
    if (f[0].empty() || f[1].empty()) reader.fail("empty id");
    if (f[0] == f[1]) reader.fail("pair compares image '" + std::string(f[0]) + "' with itself");
    pairs.push_back({std::string(f[0]), std::string(f[1]), parse_label(f[2], reader)});
  }
  return pairs;
}

void write_pairs(const std::filesystem::path& path, const PairSet& pairs) {
  auto out = open_out(path);
  write_pairs(out, pairs);
  finish(out, path);
}

PairSet read_pairs(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_pairs(in, path.string());
}

// ---------------------------------------------------------------------------
// Comparison results

namespace {
constexpr const char* kResultColumns =
    "probe_id,reference_id,label,score,score_uncertainty,decision,decision_confidence,"
    "intuitive_confidence,min_quality";
}

void write_results(std::ostream& out, const ResultsMeta& meta,
                   std::span<const ComparisonResult> results) {
  out << "#pfe-results v" << kFormatVersion << " threshold=" << format_real(meta.threshold)
      << " alpha=" << format_real(meta.alpha) << " clamp=" << (meta.clamp ? 1 : 0) << '\n';
  out << kResultColumns << '\n';
  for (const auto& r : results) {
    check_id(r.pair.probe_id);
    check_id(r.pair.reference_id);
    out << r.pair.probe_id << ',' << r.pair.reference_id << ',' << to_string(r.pair.label) << ','
        << format_real(r.score) << ',' << format_real(r.score_uncertainty) << ','
        << to_string(r.decision) << ',' << optional_real(r.decision_confidence) << ','
        << optional_real(r.intuitive_confidence) << ',' << optional_real(r.min_quality) << '\n';
  }
}

ResultsFile read_results(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  const auto kv = read_header(reader, "pfe-results");
  ResultsFile file;
  file.meta.threshold = header_real(kv, "threshold", reader);
  file.meta.alpha = header_real(kv, "alpha", reader);
  file.meta.clamp = parse_flag(kv, "clamp", reader);
  expect_columns(reader, kResultColumns);
  std::string line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) reader.fail("expected 9 fields, found " + std::to_string(f.size()));
    ComparisonResult r;
    r.pair = {std::string(f[0]), std::string(f[1]), parse_label(f[2], reader)};
    r.score = parse_real(f[3], reader, "score");
    r.score_uncertainty = parse_real(f[4], reader, "score_uncertainty");
    if (r.score_uncertainty < 0.0) reader.fail("negative score_uncertainty");
    r.decision = parse_decision(f[5], reader);
    r.decision_confidence = parse_optional_real(f[6], reader, "decision_confidence");
    r.intuitive_confidence = parse_optional_real(f[7], reader, "intuitive_confidence");
    r.min_quality = parse_optional_real(f[8], reader, "min_quality");
    file.results.push_back(std::move(r));
  }
  return file;
}

void write_results(const std::filesystem::path& path, const ResultsMeta& meta,
                   std::span<const ComparisonResult> results) {
  auto out = open_out(path);
  write_results(out, meta, results);
  finish(out, path);
}

ResultsFile read_results(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_results(in, path.string());
}

// ---------------------------------------------------------------------------
// Calibration (JSON)

void write_calibration(std::ostream& out, const ThresholdCalibration& calib) {
  nlohmann::ordered_json j;
  j["format"] = "pfe-calibration";
  j["version"] = kFormatVersion;
  // JSON has no infinity; the "inf" string stands for the +inf sentinel.
  if (std::isinf(calib.threshold)) {
    j["threshold"] = calib.threshold > 0 ? "inf" : "-inf";
  } else {
    j["threshold"] = calib.threshold;
  }
  j["fmr_target"] = calib.fmr_target;
  j["achieved_fmr"] = calib.achieved_fmr;
  j["achieved_fnmr"] = calib.achieved_fnmr;
  out << j.dump(2) << '\n';
}

ThresholdCalibration read_calibration(std::istream& in, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, source + ": " + e.what());
  }
  try {
    if (j.at("format") != "pfe-calibration" || j.at("version") != kFormatVersion) {
      throw Error(ErrorCode::HeaderMismatch, source + ": not a v1 pfe-calibration file");
    }
    ThresholdCalibration c;
    const auto& t = j.at("threshold");
    if (t.is_string()) {
      const auto s = t.get<std::string>();
      if (s == "inf") {
        c.threshold = std::numeric_limits<double>::infinity();
      } else if (s == "-inf") {
        c.threshold = -std::numeric_limits<double>::infinity();
      } else {
        throw Error(ErrorCode::ParseError, source + ": bad threshold '" + s + "'");
      }
    } else {
      c.threshold = t.get<double>();
    }
    c.fmr_target = j.at("fmr_target").get<double>();
    c.achieved_fmr = j.at("achieved_fmr").get<double>();
    c.achieved_fnmr = j.at("achieved_fnmr").get<double>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, source + ": " + e.what());
  }
}

void write_calibration(const std::filesystem::path& path, const ThresholdCalibration& calib) {
  auto out = open_out(path);
  write_calibration(out, calib);
  finish(out, path);
}

ThresholdCalibration read_calibration(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_calibration(in, path.string());
}

// ---------------------------------------------------------------------------
// ERC curves

void write_erc_curves(std::ostream& out, std::span<const ErcCurve> curves) {
  if (curves.empty()) throw Error(ErrorCode::EmptyInput, "no curves to write");
  const double threshold = curves.front().threshold;
  for (const auto& c : curves) {
    if (!(c.threshold == threshold)) {
      throw Error(ErrorCode::InvalidArgument, "curves in one file must share the threshold");
    }
  }
  out << "#pfe-erc v" << kFormatVersion << " threshold=" << format_real(threshold) << '\n';
  out << "key,reject_fraction,fnmr,fmr\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out << to_string(c.rejection_key) << ',' << format_real(p.reject_fraction) << ','
          << format_real(p.fnmr) << ',' << (p.fmr ? format_real(*p.fmr) : "NA") << '\n';
    }
    if (c.terminated_at) {
      out << to_string(c.rejection_key) << ',' << format_real(*c.terminated_at) << ",NA,NA\n";
    }
  }
}

std::vector<ErcCurve> read_erc_curves(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  const auto kv = read_header(reader, "pfe-erc");
  const double threshold = header_real(kv, "threshold", reader);
  expect_columns(reader, "key,reject_fraction,fnmr,fmr");
  std::vector<ErcCurve> curves;
  std::string line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 4) reader.fail("expected 4 fields, found " + std::to_string(f.size()));
    RejectionKey key{};
    try {
      key = parse_rejection_key(f[0]);
    } catch (const Error& e) {
      reader.fail(e.what());
    }
    if (curves.empty() || curves.back().rejection_key != key) {
      curves.push_back(ErcCurve{key, threshold, {}, std::nullopt});
    }
    auto& curve = curves.back();
    if (curve.terminated_at) reader.fail("row after the termination marker");
    const double fraction = parse_real(f[1], reader, "reject_fraction");
    if (f[2] == "NA") {
      curve.terminated_at = fraction;
      continue;
    }
    curve.points.push_back({fraction, parse_real(f[2], reader, "fnmr"),
                            parse_optional_real(f[3], reader, "fmr")});
  }
  return curves;
}

void write_erc_curves(const std::filesystem::path& path, std::span<const ErcCurve> curves) {
  auto out = open_out(path);
  write_erc_curves(out, curves);
  finish(out, path);
}

std::vector<ErcCurve> read_erc_curves(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_erc_curves(in, path.string());
}

// ---------------------------------------------------------------------------
// Heatmap

void write_heatmap(std::ostream& out, const Heatmap& map) {
  const auto& s = map.spec;
  out << "#pfe-heatmap v" << kFormatVersion
      << " threshold=" << (map.threshold ? format_real(*map.threshold) : "NA")
      << " score_bins=" << s.score_bins << " confidence_bins=" << s.confidence_bins
      << " score_min=" << format_real(s.score_min) << " score_max=" << format_real(s.score_max)
      << " confidence_min=" << format_real(s.confidence_min)
      << " confidence_max=" << format_real(s.confidence_max) << " outside=" << map.outside
      << '\n';
  out << "score_bin,confidence_bin,score_lo,score_hi,confidence_lo,confidence_hi,genuine,"
         "imposter,total\n";
  const double sw = (s.score_max - s.score_min) / static_cast<double>(s.score_bins);
  const double cw = (s.confidence_max - s.confidence_min) / static_cast<double>(s.confidence_bins);
  for (std::size_t i = 0; i < s.score_bins; ++i) {
    for (std::size_t j = 0; j < s.confidence_bins; ++j) {
      const std::size_t k = i * s.confidence_bins + j;
      out << i << ',' << j << ',' << format_real(s.score_min + sw * static_cast<double>(i)) << ','
          << format_real(s.score_min + sw * static_cast<double>(i + 1)) << ','
          << format_real(s.confidence_min + cw * static_cast<double>(j)) << ','
          << format_real(s.confidence_min + cw * static_cast<double>(j + 1)) << ','
          << map.genuine[k] << ',' << map.imposter[k] << ',' << map.genuine[k] + map.imposter[k]
          << '\n';
    }
  }
}

void write_heatmap(const std::filesystem::path& path, const Heatmap& map) {
  auto out = open_out(path);
  write_heatmap(out, map);
  finish(out, path);
}

}  // namespace pfe::io
