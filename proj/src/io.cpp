#include "mbt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mbt/errors.hpp"

namespace mbt::io {
namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

double parse_double(const std::string& s, int line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw ParseError("not a number: '" + s + "'", line);
  return v;
}

bool parse_int(const std::string& s, int& v) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  return ec == std::errc() && ptr == end;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")); }

json vec_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

Vector vec_from(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(std::string(what) + " must hold numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix mat_from(const json& j, const char* what, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) throw ParseError(std::string(what) + " must have n rows");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const Vector r = vec_from(j[static_cast<std::size_t>(i)], what);
    if (r.size() != n) throw ParseError(std::string(what) + " must be n x n");
    m.row(i) = r.transpose();
  }
  return m;
}

json params_json(const AtmmppParams& p) {
  return json{{"gamma", vec_json(p.gamma)}, {"mu", vec_json(p.mu)}, {"lambda", vec_json(p.lambda)}};
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string model_to_json(const TmapModel& model) {
  json j;
  j["n"] = model.n;
  j["alpha"] = vec_json(model.alpha.transpose());
  j["D0"] = mat_json(model.D0);
  j["D1"] = mat_json(model.D1);
  j["d"] = vec_json(model.d);
  if (model.atmmpp) j["atmmpp"] = params_json(*model.atmmpp);
  return j.dump(2) + "\n";
}

TmapModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("model JSON must be an object");
  if (j.contains("atmmpp") && !j.contains("D0")) {
    const auto& a = j["atmmpp"];
    AtmmppParams p{vec_from(a.at("gamma"), "gamma"), vec_from(a.at("mu"), "mu"), vec_from(a.at("lambda"), "lambda")};
    return build_atmmpp(p);
  }
  for (const char* key : {"n", "alpha", "D0", "D1", "d"})
    if (!j.contains(key)) throw ParseError(std::string("model JSON lacks '") + key + "'");
  if (!j["n"].is_number_integer()) throw ParseError("n must be an integer");
  TmapModel m;
  m.n = j["n"].get<int>();
  if (m.n < 1) throw StructuralError("n must be positive");
  m.alpha = vec_from(j["alpha"], "alpha").transpose();
  m.D0 = mat_from(j["D0"], "D0", m.n);
  m.D1 = mat_from(j["D1"], "D1", m.n);
  m.d = vec_from(j["d"], "d");
  if (j.contains("atmmpp")) {
    const auto& a = j["atmmpp"];
    m.atmmpp = AtmmppParams{vec_from(a.at("gamma"), "gamma"), vec_from(a.at("mu"), "mu"),
                            vec_from(a.at("lambda"), "lambda")};
  }
  require_valid(m);
  return m;
}

std::string to_string(DataFormat f) {
  switch (f) {
    case DataFormat::rates: return "rates";
    case DataFormat::vectors_csv: return "vectors-csv";
    case DataFormat::vectors_json: return "vectors-json";
  }
  return "unknown";
}

DataFormat parse_format(const std::string& name) {
  if (name == "rates") return DataFormat::rates;
  if (name == "vectors-csv" || name == "vectors") return DataFormat::vectors_csv;
  if (name == "vectors-json") return DataFormat::vectors_json;
  throw ParseError("unknown format '" + name + "'");
}

DataFormat detect_format(const std::string& text) {
  for (const auto& raw : lines_of(text)) {
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '{') return DataFormat::vectors_json;
    const auto cells = split(line);
    if (!cells.empty() && cells.front() == "age") return DataFormat::rates;
    bool ints = !cells.empty();
    for (const auto& c : cells) {
      int v;
      ints = ints && parse_int(c, v);
    }
    if (ints) return DataFormat::vectors_csv;
    break;
  }
  throw ParseError("cannot tell the input format; pass --format");
}

GlobalRates parse_rates_csv(const std::string& text, std::optional<double> l) {
  const auto lines = lines_of(text);
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i == lines.size()) throw ParseError("empty rates file");
  const auto header = split(trim(lines[i]));
  const std::vector<std::string> expected{"age", "fertility", "mortality", "count", "fertility_se"};
  if (header.size() < 3 || header.size() > expected.size()) throw ParseError("unexpected rates header", int(i) + 1);
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] != expected[c])
      throw ParseError("rates header column " + std::to_string(c + 1) + " must be '" + expected[c] + "'", int(i) + 1);
  GlobalRates rates;
  for (++i; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const int ln = static_cast<int>(i) + 1;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " cells", ln);
    RateRow r;
    if (cells[0].empty()) throw ParseError("age is required", ln);
    r.age = parse_double(cells[0], ln);
    auto opt = [&](std::size_t c) -> std::optional<double> {
      if (c >= cells.size() || cells[c].empty() || cells[c] == "NA") return std::nullopt;
      return parse_double(cells[c], ln);
    };
    r.fertility = opt(1);
    r.mortality = opt(2);
    r.count = opt(3);
    r.fertility_se = opt(4);
    rates.rows.push_back(r);
  }
  if (rates.rows.empty()) throw ParseError("rates file has no rows");
  rates.class_length = l ? *l : (rates.rows.size() > 1 ? rates.rows[1].age - rates.rows[0].age : 1.0);
  rates.validate();
  return rates;
}

std::string rates_to_csv(const GlobalRates& rates) {
  std::string out = "age,fertility,mortality,count,fertility_se\n";
  for (const auto& r : rates.rows)
    out += format_double(r.age) + "," + cell(r.fertility) + "," + cell(r.mortality) + "," + cell(r.count) + "," +
           cell(r.fertility_se) + "\n";
  return out;
}

LifeVectorSample parse_vectors_csv(const std::string& text, double class_length) {
  LifeVectorSample s;
  s.class_length = class_length;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    LifeVector v;
    for (const auto& c : split(line)) {
      int x;
      if (!parse_int(c, x)) throw ParseError("not an integer: '" + c + "'", static_cast<int>(i) + 1);
      v.entries.push_back(x);
    }
    try {
      validate_life_vector(v);
    } catch (const StructuralError& e) {
      throw ParseError(e.what(), static_cast<int>(i) + 1);
    }
    s.vectors.push_back(std::move(v));
  }
  validate_sample(s);
  return s;
}

std::string vectors_to_csv(const LifeVectorSample& sample) {
  std::string out;
  for (const auto& v : sample.vectors) {
    for (std::size_t i = 0; i < v.entries.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(v.entries[i]);
    }
    out += '\n';
  }
  return out;
}

LifeVectorSample parse_vectors_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("life-vector JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vectors") || !j["vectors"].is_array())
    throw ParseError("life-vector JSON needs a 'vectors' array");
  LifeVectorSample s;
  s.class_length = j.value("class_length", 1.0);
  for (const auto& v : j["vectors"]) {
    if (!v.is_array()) throw ParseError("each vector must be an array");
    LifeVector lv;
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw ParseError("vector entries must be integers");
      lv.entries.push_back(x.get<int>());
    }
    s.vectors.push_back(std::move(lv));
  }
  validate_sample(s);
  return s;
}

std::string vectors_to_json(const LifeVectorSample& sample) {
  json j;
  j["class_length"] = sample.class_length;
  j["vectors"] = json::array();
  for (const auto& v : sample.vectors) j["vectors"].push_back(v.entries);
  return j.dump() + "\n";
}

std::string curves_to_csv(const DemographicCurves& c) {
  std::string out = "age,mortality,fertility,survival\n";
  char buf[160];
  for (std::size_t i = 0; i < c.ages.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g,%.15g\n", c.ages[i], c.mortality[i], c.fertility[i],
                  c.survival[i]);
    out += buf;
  }
  return out;
}

std::string band_to_csv(const ConfidenceBand& b) {
  std::string out = "age,estimate,lower,upper\n";
  char buf[160];
  for (std::size_t i = 0; i < b.ages.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g,%.15g\n", b.ages[i], b.estimate[i], b.lower[i], b.upper[i]);
    out += buf;
  }
  return out;
}

std::string band_metadata_json(const ConfidenceBand& b, const std::string& output) {
  json j;
  j["output"] = output;
  j["method"] = to_string(b.method);
  j["kind"] = b.kind == BandKind::mean_sd ? "mean_sd" : "quantile";
  j["B"] = b.replicates;
  j["level"] = b.level;
  j["failures"] = b.failures;
  j["mean_width"] = number(b.mean_width());
  if (b.method == BandMethod::delta) {
    j["clipped_information"] = b.clipped;
    j["boundary"] = b.boundary;
    if (b.covariance) j["covariance"] = mat_json(*b.covariance);
  }
  return j.dump(2) + "\n";
}

std::string selection_to_json(const SelectionReport& r) {
  json j;
  j["criterion"] = r.criterion;
  j["n_values"] = r.n_values;
  json scores = json::array();
  for (double s : r.scores) scores.push_back(number(s));
  j["scores"] = scores;
  json folds = json::array();
  for (const auto& f : r.per_fold) {
    json a = json::array();
    for (double s : f) a.push_back(number(s));
    folds.push_back(a);
  }
  j["per_fold"] = folds;
  j["chosen_n"] = r.chosen_n;
  j["exclusions"] = r.exclusions;
  j["failed"] = r.failed;
  if (r.K) j["K"] = *r.K;
  if (r.M) j["M"] = *r.M;
  if (r.criterion == "msil") j["max_mass_deviation"] = r.max_mass_deviation;
  return j.dump(2) + "\n";
}

std::string fit_trace_to_json(const FitResult& fit) {
  json j;
  j["objective"] = number(fit.objective);
  j["winner"] = fit.winner;
  j["flat"] = fit.flat;
  j["params"] = params_json(fit.params);
  json seeds = json::array();
  for (const auto& t : fit.trace) {
    json s;
    s["index"] = t.index;
    s["converged"] = t.converged;
    s["value"] = number(t.value);
    s["iterations"] = t.iterations;
    s["evaluations"] = t.evaluations;
    s["start"] = params_json(t.start);
    s["end"] = params_json(t.end);
    if (!t.error.empty()) s["error"] = t.error;
    seeds.push_back(s);
  }
  j["seeds"] = seeds;
  return j.dump(2) + "\n";
}

std::string extinction_to_csv(const std::vector<double>& ages, const std::vector<double>& probabilities) {
  std::string out = "age,extinction_probability\n";
  char buf[96];
  for (std::size_t i = 0; i < ages.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.15g,%.15g\n", ages[i], probabilities[i]);
    out += buf;
  }
  return out;
}

}  // namespace mbt::io
