#include "mbt/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "mbt/demography.hpp"
#include "mbt/errors.hpp"
#include "mbt/nelder_mead.hpp"
#include "mbt/parallel.hpp"
#include "mbt/simulation.hpp"

namespace mbt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSeedFloor = 1e-6;
// Log-rate box outside which the objective is treated as infinite.
constexpr double kLogRateMin = -30.0;
constexpr double kLogRateMax = 12.0;

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }

std::vector<double> row_ages(const GlobalRates& rates) {
  std::vector<double> ages;
  for (const auto& r : rates.rows) ages.push_back(r.age);
  return ages;
}

AtmmppParams seed_from_rates(int n, const GlobalRates& rates) {
  if (n < 1) throw StructuralError("phase count must be positive");
  if (rates.rows.empty()) throw StructuralError("no usable data to seed the fit");
  const double classes = static_cast<double>(rates.rows.size());
  double fert = 0.0, mort = 0.0;
  for (const auto& r : rates.rows) {
    fert += r.fertility.value_or(0.0);
    mort += r.mortality.value_or(0.0);
  }
  AtmmppParams p;
  p.gamma = Vector::Constant(n - 1, std::max(n / (classes * rates.class_length), kSeedFloor));
  p.lambda = Vector::Constant(n, std::max(fert / classes, kSeedFloor));
  p.mu = Vector::Constant(n, std::max(mort / classes, kSeedFloor));
  return p;
}

}  // namespace

std::vector<ClassTarget> class_targets(const GlobalRates& rates) {
  const double l = rates.class_length;
  if (l != 1.0 && !(l >= 1.0 && is_integer(l)))
    throw StructuralError("global-rate fitting needs an integer class length");
  std::vector<ClassTarget> out;
  out.reserve(rates.rows.size());
  for (const auto& row : rates.rows) {
    ClassTarget t;
    if (l == 1.0) {
      t.mortality = row.mortality;
      t.fertility = row.fertility;
    } else if (row.mortality) {
      const auto eq = rates_model_equivalents(row.fertility.value_or(0.0), *row.mortality, l);
      t.mortality = eq.mortality;
      if (row.fertility) t.fertility = eq.fertility;
    }
    // Without a mortality rate the class fertility target is undefined for l > 1.
    out.push_back(t);
  }
  return out;
}

void GlobalRates::validate() const {
  if (!(class_length > 0.0) || !std::isfinite(class_length)) throw StructuralError("class length must be positive");
  if (rows.empty()) throw StructuralError("global rates have no rows");
  bool any = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (std::abs(r.age - static_cast<double>(i) * class_length) > 1e-9 * std::max(1.0, r.age)) {
      std::ostringstream os;
      os << "row " << i << " has age " << r.age << ", expected " << static_cast<double>(i) * class_length;
      throw StructuralError(os.str());
    }
    if (r.mortality && !(*r.mortality >= 0.0 && *r.mortality <= 1.0))
      throw StructuralError("mortality rate at age " + std::to_string(r.age) + " is outside [0, 1]");
    if (r.fertility && !(*r.fertility >= 0.0 && std::isfinite(*r.fertility)))
      throw StructuralError("fertility rate at age " + std::to_string(r.age) + " is negative");
    if (r.count && !(*r.count >= 0.0)) throw StructuralError("count must be nonnegative");
    any = any || r.mortality || r.fertility;
  }
  if (!any) throw StructuralError("global rates contain no observed values");
}

std::vector<double> survival_weights(const GlobalRates& rates) {
  rates.validate();
  const auto targets = class_targets(rates);
  std::vector<double> w;
  double s = 1.0;
  for (const auto& t : targets) {
    w.push_back(s);
    s *= 1.0 - t.mortality.value_or(0.0);
  }
  return w;
}

std::vector<double> count_weights(const GlobalRates& rates) {
  rates.validate();
  std::vector<double> w;
  for (const auto& r : rates.rows) w.push_back(r.count.value_or(0.0));
  return w;
}

std::vector<double> make_weights(const GlobalRates& rates, WeightScheme scheme) {
  return scheme == WeightScheme::survival ? survival_weights(rates) : count_weights(rates);
}

double objective_global(const TmapModel& model, const GlobalRates& rates, const std::vector<double>& weights) {
  rates.validate();
  if (weights.size() != rates.rows.size()) throw StructuralError("one weight per age class is required");
  const auto targets = class_targets(rates);
  const auto c = CurveEvaluator(model, rates.class_length).evaluate(row_ages(rates));
  double f = 0.0;
  for (std::size_t x = 0; x < targets.size(); ++x) {
    double term = 0.0;
    if (targets[x].mortality) term += std::pow(*targets[x].mortality - c.mortality[x], 2);
    if (targets[x].fertility) term += std::pow(*targets[x].fertility - c.fertility[x], 2);
    f += term * weights[x];
  }
  return f;
}

double objective_global(const AtmmppParams& params, const GlobalRates& rates, const std::vector<double>& weights) {
  return objective_global(build_atmmpp(params), rates, weights);
}

AtmmppParams seed_params(int n, const GlobalRates& rates) {
  rates.validate();
  return seed_from_rates(n, rates);
}

AtmmppParams seed_params(int n, const LifeVectorSample& sample) {
  // Vectors without any observed class still fix M through their length.
  return seed_from_rates(n, aggregate_rates(sample));
}

TmapModel FitResult::model() const { return build_atmmpp(params); }

std::vector<AtmmppParams> multistart_seeds(const AtmmppParams& recipe, const FitConfig& config) {
  if (config.seeds < 1) throw StructuralError("at least one seed is required");
  const int n = recipe.phases();
  const Vector base = recipe.theta();
  std::vector<AtmmppParams> out{recipe};
  for (int s = 1; s < config.seeds; ++s) {
    Rng rng = make_rng(config.rng_seed, static_cast<std::uint64_t>(s));
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector theta = base;
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] *= std::exp(config.noise * normal(rng));
    out.push_back(AtmmppParams::from_theta(n, theta));
  }
  return out;
}

FitResult fit_multistart(const AtmmppParams& recipe, const std::function<double(const TmapModel&)>& objective,
                         const FitConfig& config) {
  if (!(config.ftol > 0.0) || !(config.xtol > 0.0) || config.max_iter < 1)
    throw StructuralError("fit tolerances and iteration cap must be positive");
  const int n = recipe.phases();
  const auto starts = multistart_seeds(recipe, config);

  auto in_log_space = [&](const Vector& z) -> double {
    if ((z.array() < kLogRateMin).any() || (z.array() > kLogRateMax).any()) return kInf;
    try {
      const double v = objective(build_atmmpp(AtmmppParams::from_theta(n, z.array().exp().matrix())));
      return std::isfinite(v) ? v : kInf;
    } catch (const Error&) {
      return kInf;
    }
  };

  NelderMeadOptions nm;
  nm.ftol = config.ftol;
  nm.xtol = config.xtol;
  nm.max_iter = config.max_iter;

  const auto traces = parallel_map(starts.size(), config.jobs, [&](std::size_t s) {
    SeedTrace t;
    t.index = static_cast<int>(s);
    t.start = starts[s];
    t.end = starts[s];
    try {
      const Vector z0 = starts[s].theta().array().log().matrix();
      const auto r = nelder_mead(in_log_space, z0, nm);
      t.end = AtmmppParams::from_theta(n, r.x.array().exp().matrix());
      t.value = r.value;
      t.converged = r.converged && std::isfinite(r.value);
      t.flat = r.flat;
      t.evaluations = r.evaluations;
      t.iterations = r.iterations;
    } catch (const std::exception& e) {
      t.error = e.what();
      t.value = kInf;
    }
    return t;
  });

  FitResult res;
  res.trace = traces;
  res.winner = -1;
  for (const auto& t : traces) {
    if (!t.converged) continue;
    if (res.winner < 0 || t.value < traces[res.winner].value) res.winner = t.index;
  }
  if (res.winner < 0) {
    std::ostringstream os;
    os << "no seed converged:";
    for (const auto& t : traces) {
      os << " [seed " << t.index << " value " << t.value << " iterations " << t.iterations;
      if (!t.error.empty()) os << " error " << t.error;
      os << "]";
    }
    throw OptimizationError(os.str());
  }
  const auto& best = traces[res.winner];
  res.params = best.end;
  res.objective = best.value;
  res.flat = best.flat;
  return res;
}

FitResult fit_global(const GlobalRates& rates, const FitConfig& config) {
  rates.validate();
  const auto weights = make_weights(rates, config.weights);
  // Targets are recomputed per call inside objective_global; hoist validation only.
  auto objective = [&](const TmapModel& m) { return objective_global(m, rates, weights); };
  return fit_multistart(seed_params(config.n, rates), objective, config);
}

SampleLikelihood::SampleLikelihood(const LifeVectorSample& sample)
    : class_length_(sample.class_length), max_count_(mbt::max_count(sample)) {
  validate_sample(sample);
  std::map<LifeVector, double> groups;
  for (const auto& v : sample.vectors) groups[v] += 1.0;
  for (auto& [v, count] : groups) {
    unique_.push_back(v);
    multiplicity_.push_back(count);
  }
}

double SampleLikelihood::operator()(const TmapModel& model) const {
  const auto kernels = count_kernels(model, class_length_, max_count_);
  double total = 0.0;
  for (std::size_t i = 0; i < unique_.size(); ++i) {
    const double lp = log_life_vector_probability(model, unique_[i], kernels);
    if (lp == kLogZero) return kLogZero;
    total += multiplicity_[i] * lp;
  }
  return total;
}

FitResult fit_individual(const LifeVectorSample& sample, const FitConfig& config) {
  const SampleLikelihood loglik(sample);
  auto objective = [&](const TmapModel& m) {
    const double v = loglik(m);
    return v == kLogZero ? kInf : -v;
  };
  return fit_multistart(seed_params(config.n, sample), objective, config);
}

}  // namespace mbt
