#include "mbt/cli.hpp"

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "mbt/demography.hpp"
#include "mbt/errors.hpp"
#include "mbt/estimation.hpp"
#include "mbt/io.hpp"
#include "mbt/selection.hpp"
#include "mbt/simulation.hpp"
#include "mbt/uncertainty.hpp"

#ifndef MBT_VERSION
#define MBT_VERSION "0.0.0"
#endif

namespace mbt::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string data, model_path, format, preset, out = ".";
  std::optional<double> l;
  int n = 1;
  std::string n_range = "1..15";
  std::string criterion = "aic";
  int folds = 5;
  std::optional<int> K, M;
  std::string rule, msil_grid, method = "bootstrap", fit_method = "individual", weights = "survival";
  double covering_p = 0.05;
  int B = 25;
  int seeds = 25;
  double noise = 0.25;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::size_t N = 500;
  double T = 15.0;
  double censor = 0.0;
  std::optional<double> max_age;
  double step = 1.0;
  double level = 0.95;
  std::string kind = "mean_sd";
  std::size_t replicates = 10;
  std::string manifest;
};

struct Context {
  RunConfig cfg;
  std::uint64_t seed = 0;
  std::vector<std::string> written;
  std::ostream& out;
};

std::pair<int, int> parse_range(const std::string& s) {
  static const std::regex re(R"(^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw StructuralError("range must look like a..b: '" + s + "'");
  const int a = std::stoi(m[1]);
  const int b = m[2].matched ? std::stoi(m[2]) : a;
  if (b < a) throw StructuralError("empty range '" + s + "'");
  return {a, b};
}

std::vector<int> expand(const std::string& s) {
  const auto [a, b] = parse_range(s);
  std::vector<int> v;
  for (int i = a; i <= b; ++i) v.push_back(i);
  return v;
}

void emit(Context& ctx, const std::string& name, const std::string& content) {
  io::write_atomic(fs::path(ctx.cfg.out) / name, content);
  ctx.written.push_back(name);
}

FitConfig fit_config(const Context& ctx, int n) {
  FitConfig f;
  f.n = n;
  f.seeds = ctx.cfg.seeds;
  f.noise = ctx.cfg.noise;
  f.rng_seed = ctx.seed;
  f.jobs = ctx.cfg.jobs;
  if (ctx.cfg.weights == "survival") f.weights = WeightScheme::survival;
  else if (ctx.cfg.weights == "counts") f.weights = WeightScheme::counts;
  else throw StructuralError("weights must be survival or counts");
  return f;
}

struct Dataset {
  io::DataFormat format;
  GlobalRates rates;
  LifeVectorSample sample;
  bool individual() const { return format != io::DataFormat::rates; }
};

Dataset load_data(const RunConfig& cfg) {
  if (cfg.data.empty()) throw StructuralError("--data is required");
  const auto text = io::read_file(cfg.data);
  Dataset d;
  d.format = cfg.format.empty() ? io::detect_format(text) : io::parse_format(cfg.format);
  switch (d.format) {
    case io::DataFormat::rates: d.rates = io::parse_rates_csv(text, cfg.l); break;
    case io::DataFormat::vectors_csv: d.sample = io::parse_vectors_csv(text, cfg.l.value_or(1.0)); break;
    case io::DataFormat::vectors_json:
      d.sample = io::parse_vectors_json(text);
      if (cfg.l) d.sample.class_length = *cfg.l;
      break;
  }
  return d;
}

TmapModel load_truth(const RunConfig& cfg) {
  if (!cfg.model_path.empty()) return io::model_from_json(io::read_file(cfg.model_path));
  if (!cfg.preset.empty()) return build_atmmpp(preset(cfg.preset).params);
  throw StructuralError("a model is required: pass --model or --preset");
}

std::vector<double> grid(double max_age, double step) {
  if (!(step > 0.0)) throw StructuralError("--step must be positive");
  std::vector<double> a;
  for (int i = 0;; ++i) {
    const double x = i * step;
    if (x > max_age + 1e-9) break;
    a.push_back(x);
  }
  return a;
}

double sample_max_age(const LifeVectorSample& s) {
  std::size_t len = 1;
  for (const auto& v : s.vectors) {
    std::size_t k = v.entries.size();
    if (k && v.entries.back() == kDeath) --k;
    len = std::max(len, k);
  }
  return static_cast<double>(len - 1) * s.class_length;
}

int cmd_fit(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto data = load_data(c);
  const auto fc = fit_config(ctx, c.n);
  const auto fit = data.individual() ? fit_individual(data.sample, fc) : fit_global(data.rates, fc);
  const double l = data.individual() ? data.sample.class_length : data.rates.class_length;
  const double top = c.max_age.value_or(data.individual() ? sample_max_age(data.sample)
                                                          : data.rates.rows.back().age);
  AgeGrid g{grid(top, l), l};
  emit(ctx, "model.json", io::model_to_json(fit.model()));
  emit(ctx, "curves.csv", io::curves_to_csv(curves(fit.model(), g)));
  emit(ctx, "fit_trace.json", io::fit_trace_to_json(fit));
  ctx.out << "fit n=" << c.n << " objective=" << io::format_double(fit.objective) << " winner=" << fit.winner
          << (fit.flat ? " (flat objective at the seed)" : "") << "\n";
  return kOk;
}

int cmd_select(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto n_range = expand(c.n_range);
  if (c.criterion == "mse") {
    const auto truth = load_truth(c);
    SimConfig sim{c.N, c.T, c.l.value_or(1.0), 0, 0.0};
    auto gen = [&](std::size_t r) {
      SimConfig s = sim;
      s.seed = derive_seed(ctx.seed, 1000 + r);
      return aggregate_rates(simulate_sample(truth, s));
    };
    const auto rep = mse_global(truth, n_range, gen, c.replicates, fit_config(ctx, 1));
    emit(ctx, "selection.json", io::selection_to_json(rep));
    ctx.out << "mse chose n=" << rep.chosen_n << "\n";
    return kOk;
  }
  const auto data = load_data(c);
  if (!data.individual()) throw StructuralError("criterion '" + c.criterion + "' needs life vectors");
  const auto fc = fit_config(ctx, 1);
  if (c.criterion == "aic") {
    const auto rep = aic(data.sample, n_range, fc);
    emit(ctx, "selection.json", io::selection_to_json(rep));
    ctx.out << "aic chose n=" << rep.chosen_n << "\n";
    return kOk;
  }
  if (c.criterion == "cv") {
    const auto rep = cross_validate(data.sample, n_range, c.folds, fc);
    emit(ctx, "selection.json", io::selection_to_json(rep));
    ctx.out << "cv chose n=" << rep.chosen_n << "\n";
    return kOk;
  }
  if (c.criterion != "msil") throw StructuralError("criterion must be aic, cv, msil or mse");

  std::vector<std::pair<int, int>> grid_km;  // (K, M)
  if (!c.msil_grid.empty()) {
    static const std::regex re(R"(^\s*M\s*=\s*([0-9.]+)\s*,\s*K\s*=\s*([0-9.]+)\s*$)");
    std::smatch m;
    if (!std::regex_match(c.msil_grid, m, re)) throw StructuralError("--msil-grid must look like M=2..4,K=0..3");
    for (int Mv : expand(m[1])) {
      if (Mv < 1) throw StructuralError("M must be positive");
      for (int Kv : expand(m[2])) grid_km.emplace_back(Kv, Mv);
    }
  } else if (!c.rule.empty()) {
    const auto rates = aggregate_rates(data.sample);
    MsilPartition p;
    if (c.rule == "mk1") p = partition_mk1(rates);
    else if (c.rule == "mk2") p = partition_mk2(rates, c.covering_p);
    else throw StructuralError("--rule must be mk1 or mk2");
    ctx.out << "rule " << c.rule << " gives M=" << p.M << " K=" << p.K << "\n";
    grid_km.emplace_back(p.K, p.M);
  } else {
    if (!c.K || !c.M) throw StructuralError("msil needs --K and --M, --rule, or --msil-grid");
    grid_km.emplace_back(*c.K, *c.M);
  }
  for (const auto& [Kv, Mv] : grid_km) enumerate_classes(Kv, Mv);
  const auto fits = fit_folds(data.sample, n_range, c.folds, fc);
  if (grid_km.size() == 1) {
    const auto rep = msil_select(data.sample, fits, grid_km[0].first, grid_km[0].second);
    emit(ctx, "selection.json", io::selection_to_json(rep));
    ctx.out << "msil (M=" << *rep.M << ", K=" << *rep.K << ") chose n=" << rep.chosen_n << "\n";
    return kOk;
  }
  std::string table = "M,K,chosen_n\n";
  json reports = json::array();
  for (const auto& [Kv, Mv] : grid_km) {
    const auto rep = msil_select(data.sample, fits, Kv, Mv);
    table += std::to_string(Mv) + "," + std::to_string(Kv) + "," + std::to_string(rep.chosen_n) + "\n";
    reports.push_back(json::parse(io::selection_to_json(rep)));
  }
  emit(ctx, "msil_grid.csv", table);
  emit(ctx, "selection.json", reports.dump(2) + "\n");
  ctx.out << table;
  return kOk;
}

int cmd_simulate(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto truth = load_truth(c);
  SimConfig sim{c.N, c.T, c.l.value_or(1.0), ctx.seed, c.censor};
  if (!c.preset.empty() && c.model_path.empty()) {
    // Preset sizes apply unless given explicitly on the command line.
    const auto& p = preset(c.preset);
    if (c.N == RunConfig{}.N) sim.N = p.N;
    if (c.T == RunConfig{}.T) sim.T = p.T;
  }
  const auto sample = simulate_sample(truth, sim);
  emit(ctx, "vectors.csv", io::vectors_to_csv(sample));
  emit(ctx, "rates.csv", io::rates_to_csv(aggregate_rates(sample)));
  emit(ctx, "truth.json", io::model_to_json(truth));
  ctx.out << "simulated " << sample.size() << " life vectors\n";
  return kOk;
}

int cmd_ci(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto fc = [&] {
    auto f = fit_config(ctx, c.n);
    f.jobs = 1;  // replicates are the parallel unit
    return f;
  }();
  SampleFitFn fit_fn;
  if (c.fit_method == "individual")
    fit_fn = [fc](const LifeVectorSample& s) { return fit_individual(s, fc).model(); };
  else if (c.fit_method == "global")
    fit_fn = [fc](const LifeVectorSample& s) { return fit_global(aggregate_rates(s), fc).model(); };
  else throw StructuralError("--fit-method must be individual or global");

  BandConfig bc;
  bc.B = c.B;
  bc.seed = ctx.seed;
  bc.jobs = c.jobs;
  bc.level = c.level;
  if (c.kind == "quantile") bc.kind = BandKind::quantile;
  else if (c.kind != "mean_sd") throw StructuralError("--kind must be mean_sd or quantile");

  std::optional<Dataset> data;
  if (c.method != "resample") data = load_data(c);
  if (data && !data->individual()) throw StructuralError("confidence bands need life vectors");
  const double l = data ? data->sample.class_length : c.l.value_or(1.0);
  const double top = c.max_age.value_or(data ? sample_max_age(data->sample) : c.T - l);
  const auto ages = grid(top, l);
  const std::map<std::string, std::function<std::vector<double>(const DemographicCurves&)>> outputs{
      {"mortality", [](const DemographicCurves& d) { return d.mortality; }},
      {"fertility", [](const DemographicCurves& d) { return d.fertility; }}};

  for (const auto& [name, pick] : outputs) {
    OutputFn out = [&, pick = pick](const TmapModel& m) { return pick(CurveEvaluator(m, l).evaluate(ages)); };
    ConfidenceBand band;
    if (c.method == "bootstrap") {
      band = band_bootstrap(data->sample, fit_fn, out, ages, bc);
    } else if (c.method == "resample") {
      const auto truth = load_truth(c);
      band = band_resample(truth, SimConfig{c.N, c.T, l, 0, c.censor}, fit_fn, out, ages, bc);
    } else if (c.method == "delta") {
      const auto fit = fit_individual(data->sample, fit_config(ctx, c.n));
      band = band_delta(data->sample, fit.params, out, ages, c.level);
    } else {
      throw StructuralError("--method must be bootstrap, resample or delta");
    }
    emit(ctx, "band_" + name + ".csv", io::band_to_csv(band));
    emit(ctx, "band_" + name + ".json", io::band_metadata_json(band, name));
    ctx.out << name << " band mean width " << io::format_double(band.mean_width());
    if (band.failures) ctx.out << " (" << band.failures << " failed replicates)";
    if (band.clipped) ctx.out << " (information matrix clipped)";
    if (band.boundary) ctx.out << " (boundary estimate: delta band unreliable)";
    ctx.out << "\n";
  }
  return kOk;
}

int cmd_extinction(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto model = load_truth(c);
  const auto ages = grid(c.max_age.value_or(15.0), c.step);
  const Vector q = extinction_vector(model);
  std::vector<double> probs;
  for (double x : ages) probs.push_back(extinction_by_initial_age(model, x, q));
  emit(ctx, "extinction.csv", io::extinction_to_csv(ages, probs));
  ctx.out << "extinction probability at birth " << io::format_double(probs.front()) << "\n";
  return kOk;
}

int cmd_curves(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto model = load_truth(c);
  const double l = c.l.value_or(1.0);
  AgeGrid g{grid(c.max_age.value_or(15.0), c.step), l};
  emit(ctx, "curves.csv", io::curves_to_csv(curves(model, g)));
  return kOk;
}

int cmd_validate(Context& ctx) {
  const auto& c = ctx.cfg;
  json report;
  bool ok = true;
  if (!c.model_path.empty()) {
    const auto j = json::parse(io::read_file(c.model_path), nullptr, false);
    if (j.is_discarded()) throw ParseError("model JSON is malformed");
    TmapModel m;
    try {
      m = io::model_from_json(j.dump());
    } catch (const StructuralError&) {
      // Rebuild without the validity check so the diagnostics can be listed.
      m.n = j.at("n").get<int>();
      m.alpha = RowVector(m.n);
      m.D0 = Matrix(m.n, m.n);
      m.D1 = Matrix(m.n, m.n);
      m.d = Vector(m.n);
      for (int i = 0; i < m.n; ++i) {
        m.alpha[i] = j["alpha"][i].get<double>();
        m.d[i] = j["d"][i].get<double>();
        for (int k = 0; k < m.n; ++k) {
          m.D0(i, k) = j["D0"][i][k].get<double>();
          m.D1(i, k) = j["D1"][i][k].get<double>();
        }
      }
    }
    json diags = json::array();
    for (const auto& d : validate(m)) {
      diags.push_back({{"invariant", d.invariant}, {"row", d.row}, {"col", d.col}, {"residual", d.residual},
                       {"message", d.message}});
      ctx.out << "model: " << d.message << "\n";
    }
    ok = ok && diags.empty();
    report["model"] = diags;
  }
  if (!c.data.empty()) {
    try {
      const auto d = load_data(c);
      report["data"] = {{"format", io::to_string(d.format)}, {"ok", true}};
    } catch (const Error& e) {
      ok = false;
      report["data"] = {{"ok", false}, {"error", e.what()}};
      ctx.out << "data: " << e.what() << "\n";
    }
  }
  if (report.empty()) throw StructuralError("validate needs --model and/or --data");
  report["ok"] = ok;
  emit(ctx, "validation.json", report.dump(2) + "\n");
  ctx.out << (ok ? "valid\n" : "invalid\n");
  return ok ? kOk : kValidation;
}

std::string manifest_json(const Context& ctx, const std::vector<std::string>& args) {
  json j;
  j["tool"] = "mbtfit";
  j["version"] = MBT_VERSION;
  j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  j["command"] = ctx.cfg.command;
  j["seed"] = ctx.seed;
  j["args"] = args;
  j["outputs"] = ctx.written;
  return j.dump(2) + "\n";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kParse;
  if (dynamic_cast<const StructuralError*>(&e)) return kStructural;
  if (dynamic_cast<const NumericError*>(&e)) return kNumeric;
  if (dynamic_cast<const OptimizationError*>(&e)) return kOptimization;
  if (dynamic_cast<const CapacityError*>(&e)) return kCapacity;
  if (dynamic_cast<const IterationError*>(&e)) return kIteration;
  if (dynamic_cast<const IoError*>(&e)) return kIo;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return kIo;
  return kOther;
}

/// Replaces (or appends) the value of `--name` in an argument list.
std::vector<std::string> with_option(std::vector<std::string> args, const std::string& name, const std::string& v) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == name && i + 1 < args.size()) {
      args[i + 1] = v;
      return args;
    }
    if (args[i].rfind(name + "=", 0) == 0) {
      args[i] = name + "=" + v;
      return args;
    }
  }
  args.push_back(name);
  args.push_back(v);
  return args;
}

bool has_option(const std::vector<std::string>& args, const std::string& name) {
  for (const auto& a : args)
    if (a == name || a.rfind(name + "=", 0) == 0) return true;
  return false;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fit Markovian binary tree population models to demographic data", "mbtfit"};
  app.set_version_flag("--version", MBT_VERSION);
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* s) {
    s->add_option("--out", c.out, "Output directory")->capture_default_str();
    s->add_option("--seed", c.seed, "Master RNG seed (drawn and recorded when absent)");
    s->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  };
  auto data_opts = [&](CLI::App* s) {
    s->add_option("--data", c.data, "Rates CSV, life-vector CSV, or life-vector JSON");
    s->add_option("--format", c.format, "Override detection: rates | vectors-csv | vectors-json");
    s->add_option("--l", c.l, "Age-class length in years")->check(CLI::PositiveNumber);
  };
  auto fit_opts = [&](CLI::App* s) {
    s->add_option("--seeds", c.seeds, "Multi-start seeds")->check(CLI::PositiveNumber)->capture_default_str();
    s->add_option("--noise", c.noise, "Log-normal jitter of seeds after the first")->capture_default_str();
    s->add_option("--weights", c.weights, "survival | counts")->capture_default_str();
  };
  auto model_opts = [&](CLI::App* s) {
    s->add_option("--model", c.model_path, "Model JSON");
    s->add_option("--preset", c.preset, "example1 | example2 | example3");
  };

  auto* fit = app.add_subcommand("fit", "Fit a model to rates or life vectors");
  common(fit), data_opts(fit), fit_opts(fit);
  fit->add_option("--n", c.n, "Number of phases")->check(CLI::PositiveNumber)->capture_default_str();
  fit->add_option("--max-age", c.max_age, "Last age of the curves");

  auto* sel = app.add_subcommand("select", "Choose the number of phases");
  common(sel), data_opts(sel), fit_opts(sel), model_opts(sel);
  sel->add_option("--criterion", c.criterion, "aic | cv | msil | mse")->capture_default_str();
  sel->add_option("--n-range", c.n_range, "Candidate phases a..b")->capture_default_str();
  sel->add_option("--folds", c.folds, "Cross-validation folds")->capture_default_str();
  sel->add_option("--K", c.K, "MSIL count cap");
  sel->add_option("--M", c.M, "MSIL class horizon");
  sel->add_option("--rule", c.rule, "MSIL partition rule: mk1 | mk2");
  sel->add_option("--covering-p", c.covering_p, "Tail probability p of rule mk2")->capture_default_str();
  sel->add_option("--msil-grid", c.msil_grid, "Sensitivity sweep, e.g. M=2..4,K=0..3");
  sel->add_option("--replicates", c.replicates, "Datasets for the mse criterion")->capture_default_str();
  sel->add_option("--N", c.N, "Individuals per simulated dataset (mse)")->capture_default_str();
  sel->add_option("--T", c.T, "Observation horizon (mse)")->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "Simulate life vectors");
  common(sim), model_opts(sim);
  sim->add_option("--N", c.N, "Individuals")->capture_default_str();
  sim->add_option("--T", c.T, "Observation horizon")->capture_default_str();
  sim->add_option("--l", c.l, "Age-class length")->check(CLI::PositiveNumber);
  sim->add_option("--censor", c.censor, "Probability of masking a class")->capture_default_str();

  auto* ci = app.add_subcommand("ci", "Pointwise confidence bands for mortality and fertility");
  common(ci), data_opts(ci), fit_opts(ci), model_opts(ci);
  ci->add_option("--n", c.n, "Number of phases")->check(CLI::PositiveNumber)->capture_default_str();
  ci->add_option("--method", c.method, "bootstrap | resample | delta")->capture_default_str();
  ci->add_option("--fit-method", c.fit_method, "individual | global")->capture_default_str();
  ci->add_option("--B", c.B, "Replicates")->capture_default_str();
  ci->add_option("--level", c.level, "Confidence level")->capture_default_str();
  ci->add_option("--kind", c.kind, "mean_sd | quantile")->capture_default_str();
  ci->add_option("--max-age", c.max_age, "Last age of the band");
  ci->add_option("--N", c.N, "Individuals per resampled dataset")->capture_default_str();
  ci->add_option("--T", c.T, "Horizon of resampled datasets")->capture_default_str();
  ci->add_option("--censor", c.censor, "Censoring of resampled datasets")->capture_default_str();

  auto* ext = app.add_subcommand("extinction", "Extinction probability by initial age");
  common(ext), model_opts(ext);
  ext->add_option("--max-age", c.max_age, "Last age (default 15)");
  ext->add_option("--step", c.step, "Age step")->capture_default_str();

  auto* cur = app.add_subcommand("curves", "Mortality, fertility and survival curves of a model");
  common(cur), model_opts(cur);
  cur->add_option("--l", c.l, "Age-class length")->check(CLI::PositiveNumber);
  cur->add_option("--max-age", c.max_age, "Last age (default 15)");
  cur->add_option("--step", c.step, "Age step")->capture_default_str();

  auto* val = app.add_subcommand("validate", "Check a model and/or a dataset");
  common(val), data_opts(val);
  val->add_option("--model", c.model_path, "Model JSON");

  auto* rep = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  rep->add_option("--manifest", c.manifest, "manifest.json of an earlier run")->required();
  std::optional<std::string> replay_out;
  rep->add_option("--out", replay_out, "Write outputs here instead");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (rep->parsed()) {
      const auto j = json::parse(io::read_file(c.manifest), nullptr, false);
      if (j.is_discarded() || !j.contains("args")) throw ParseError("not a manifest: " + c.manifest);
      auto again = j["args"].get<std::vector<std::string>>();
      if (replay_out) again = with_option(again, "--out", *replay_out);
      return run(again, out, err);
    }

    Context ctx{c, 0, {}, out};
    ctx.cfg.command = app.get_subcommands().front()->get_name();
    if (c.seed) {
      ctx.seed = *c.seed;
    } else {
      std::random_device rd;
      ctx.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
    }
    auto recorded = args;
    if (!has_option(recorded, "--seed")) recorded = with_option(recorded, "--seed", std::to_string(ctx.seed));

    int code = kOther;
    const auto& cmd = ctx.cfg.command;
    if (cmd == "fit") code = cmd_fit(ctx);
    else if (cmd == "select") code = cmd_select(ctx);
    else if (cmd == "simulate") code = cmd_simulate(ctx);
    else if (cmd == "ci") code = cmd_ci(ctx);
    else if (cmd == "extinction") code = cmd_extinction(ctx);
    else if (cmd == "curves") code = cmd_curves(ctx);
    else if (cmd == "validate") code = cmd_validate(ctx);
    io::write_atomic(fs::path(ctx.cfg.out) / "manifest.json", manifest_json(ctx, recorded));
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace mbt::cli
