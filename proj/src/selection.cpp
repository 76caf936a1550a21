#include "mbt/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "mbt/demography.hpp"
#include "mbt/errors.hpp"
#include "mbt/parallel.hpp"
#include "mbt/simulation.hpp"

namespace mbt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
// Stream of the master seed reserved for fold assignment.
constexpr std::uint64_t kFoldStream = 0xF01D;

void check_range(const std::vector<int>& n_range) {
  if (n_range.empty()) throw StructuralError("empty phase range");
  for (int n : n_range)
    if (n < 1) throw StructuralError("phase counts must be positive");
}

FitConfig single_threaded(FitConfig c, int n) {
  c.n = n;
  c.jobs = 1;
  return c;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void finish(SelectionReport& r) {
  for (std::size_t i = 0; i < r.n_values.size(); ++i)
    if (std::isnan(r.scores[i])) r.failed.push_back(r.n_values[i]);
  r.chosen_n = choose_n(r.n_values, r.scores, r.minimize);
}

}  // namespace

int choose_n(const std::vector<int>& n_values, const std::vector<double>& scores, bool minimize) {
  int best = -1;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (std::isnan(scores[i])) continue;
    if (best < 0) {
      best = static_cast<int>(i);
      continue;
    }
    const double a = scores[i], b = scores[best];
    const bool better = minimize ? a < b : a > b;
    if (better || (a == b && n_values[i] < n_values[best])) best = static_cast<int>(i);
  }
  if (best < 0) throw OptimizationError("every candidate phase count failed");
  return n_values[best];
}

SelectionReport aic(const LifeVectorSample& sample, const std::vector<int>& n_range, const FitConfig& config) {
  check_range(n_range);
  validate_sample(sample);
  SelectionReport r;
  r.criterion = "aic";
  r.n_values = n_range;
  r.scores = parallel_map(n_range.size(), config.jobs, [&](std::size_t i) {
    const int n = n_range[i];
    try {
      const auto fit = fit_individual(sample, single_threaded(config, n));
      return 2.0 * AtmmppParams::parameter_count(n) + 2.0 * fit.objective;
    } catch (const Error&) {
      return kNaN;
    }
  });
  finish(r);
  return r;
}

std::vector<std::vector<std::size_t>> fold_partition(std::size_t N, int folds, std::uint64_t seed) {
  if (folds < 2 || N < static_cast<std::size_t>(folds))
    throw StructuralError("cross-validation needs N >= folds >= 2");
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(seed, kFoldStream);
  // Fisher-Yates with an explicit draw so the shuffle does not depend on the
  // standard library's distribution implementation.
  for (std::size_t i = N; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(folds));
  for (std::size_t i = 0; i < N; ++i) out[i % out.size()].push_back(order[i]);
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

LifeVectorSample subsample(const LifeVectorSample& sample, const std::vector<std::size_t>& indices) {
  LifeVectorSample out;
  out.class_length = sample.class_length;
  out.vectors.reserve(indices.size());
  for (auto i : indices) out.vectors.push_back(sample.vectors.at(i));
  return out;
}

FoldFits fit_folds(const LifeVectorSample& sample, const std::vector<int>& n_range, int folds,
                   const FitConfig& config) {
  check_range(n_range);
  validate_sample(sample);
  FoldFits ff;
  ff.n_values = n_range;
  ff.folds = fold_partition(sample.size(), folds, config.rng_seed);
  const std::size_t F = ff.folds.size();
  std::vector<LifeVectorSample> training(F);
  for (std::size_t k = 0; k < F; ++k) {
    std::vector<bool> held(sample.size(), false);
    for (auto i : ff.folds[k]) held[i] = true;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < sample.size(); ++i)
      if (!held[i]) idx.push_back(i);
    training[k] = subsample(sample, idx);
  }
  auto flat = parallel_map(n_range.size() * F, config.jobs, [&](std::size_t t) -> std::optional<TmapModel> {
    try {
      return fit_individual(training[t % F], single_threaded(config, n_range[t / F])).model();
    } catch (const Error&) {
      return std::nullopt;
    }
  });
  ff.models.assign(n_range.size(), {});
  for (std::size_t t = 0; t < flat.size(); ++t) ff.models[t / F].push_back(std::move(flat[t]));
  return ff;
}

SelectionReport cross_validate(const LifeVectorSample& sample, const FoldFits& fits) {
  SelectionReport r;
  r.criterion = "cv";
  r.minimize = false;
  r.n_values = fits.n_values;
  for (std::size_t i = 0; i < fits.n_values.size(); ++i) {
    std::vector<double> per;
    bool failed = false;
    for (std::size_t k = 0; k < fits.folds.size(); ++k) {
      const auto& m = fits.models[i][k];
      if (!m) {
        failed = true;
        per.push_back(kNaN);
        continue;
      }
      const auto test = subsample(sample, fits.folds[k]);
      const auto ll = log_likelihood(*m, test);
      per.push_back(ll.is_log_zero() ? -kInf : ll.value / static_cast<double>(test.size()));
    }
    r.scores.push_back(failed ? kNaN : mean(per));
    r.per_fold.push_back(std::move(per));
  }
  finish(r);
  return r;
}

SelectionReport cross_validate(const LifeVectorSample& sample, const std::vector<int>& n_range, int folds,
                               const FitConfig& config) {
  return cross_validate(sample, fit_folds(sample, n_range, folds, config));
}

SelectionReport msil_select(const LifeVectorSample& sample, const FoldFits& fits, int K, int M) {
  const auto classes = enumerate_classes(K, M);
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t c = 0; c < classes.classes.size(); ++c) index.emplace(classes.classes[c].entries, c);

  // Class of every vector; later -2 segments never enter the empirical term.
  std::vector<std::optional<std::size_t>> class_index(sample.size());
  std::size_t exclusions = 0;
  for (std::size_t v = 0; v < sample.size(); ++v) {
    const auto& e = sample.vectors[v].entries;
    if (const auto c = class_of(sample.vectors[v], K, M)) {
      class_index[v] = index.at(c->entries);
    } else {
      ++exclusions;
    }
    for (std::size_t j = 1; j < e.size(); ++j)
      if (e[j - 1] == kCensored && e[j] != kCensored) ++exclusions;
  }

  SelectionReport r;
  r.criterion = "msil";
  r.n_values = fits.n_values;
  r.K = K;
  r.M = M;
  r.exclusions = exclusions;
  for (std::size_t i = 0; i < fits.n_values.size(); ++i) {
    std::vector<double> per;
    bool failed = false;
    for (std::size_t k = 0; k < fits.folds.size(); ++k) {
      const auto& m = fits.models[i][k];
      if (!m) {
        failed = true;
        per.push_back(kNaN);
        continue;
      }
      const auto kernels = count_kernels(*m, sample.class_length, K);
      std::vector<double> mass(classes.classes.size());
      double total = 0.0, squares = 0.0;
      for (std::size_t c = 0; c < mass.size(); ++c) {
        mass[c] = msil_class_mass(*m, classes.classes[c], kernels);
        total += mass[c];
        squares += mass[c] * mass[c];
      }
      r.max_mass_deviation = std::max(r.max_mass_deviation, std::abs(total - 1.0));
      double cross = 0.0;
      std::size_t mapped = 0;
      for (auto v : fits.folds[k]) {
        if (!class_index[v]) continue;
        cross += mass[*class_index[v]];
        ++mapped;
      }
      if (mapped > 0) cross /= static_cast<double>(mapped);
      per.push_back(squares - 2.0 * cross);
    }
    r.scores.push_back(failed ? kNaN : mean(per));
    r.per_fold.push_back(std::move(per));
  }
  finish(r);
  return r;
}

SelectionReport msil_select(const LifeVectorSample& sample, const std::vector<int>& n_range, int folds, int K,
                            int M, const FitConfig& config) {
  enumerate_classes(K, M);  // capacity check before any fitting
  return msil_select(sample, fit_folds(sample, n_range, folds, config), K, M);
}

namespace {

double max_fertility(const std::vector<ClassTarget>& t, const GlobalRates& rates, int M, bool add_se) {
  double best = 0.0;
  for (int x = 1; x <= M && x < static_cast<int>(t.size()); ++x) {
    if (!t[x].fertility) continue;
    double b = *t[x].fertility;
    if (add_se) b += rates.rows[x].fertility_se.value_or(0.0) * rates.class_length;
    best = std::max(best, b);
  }
  return best;
}

int k_from(double max_b) { return std::max(0, static_cast<int>(std::ceil(max_b - 1e-12)) - 1); }

}  // namespace

MsilPartition partition_mk1(const GlobalRates& rates) {
  const auto s = survival_weights(rates);
  double lifetime = 0.0;
  for (std::size_t x = 1; x < s.size(); ++x) lifetime += s[x];
  MsilPartition p;
  p.M = static_cast<int>(std::ceil(lifetime - 1e-12)) + 1;
  p.K = k_from(max_fertility(class_targets(rates), rates, p.M, false));
  return p;
}

MsilPartition partition_mk2(const GlobalRates& rates, double p) {
  if (!(p > 0.0 && p < 1.0)) throw StructuralError("covering parameter p must lie in (0, 1)");
  const auto s = survival_weights(rates);
  std::size_t x = 0;
  while (x < s.size() && !(s[x] < p)) ++x;
  MsilPartition out;
  out.M = static_cast<int>(x) + 1;
  out.K = k_from(max_fertility(class_targets(rates), rates, out.M, true));
  return out;
}

double curve_mse(const TmapModel& truth, const TmapModel& fit, const std::vector<double>& ages, double l) {
  const auto a = CurveEvaluator(truth, l).evaluate(ages);
  const auto b = CurveEvaluator(fit, l).evaluate(ages);
  double s = 0.0;
  for (std::size_t x = 0; x < ages.size(); ++x)
    s += (std::pow(a.mortality[x] - b.mortality[x], 2) + std::pow(a.fertility[x] - b.fertility[x], 2)) *
         a.survival[x];
  return s;
}

SelectionReport mse_global(const TmapModel& truth, const std::vector<int>& n_range,
                           const std::function<GlobalRates(std::size_t)>& generate, std::size_t replicates,
                           const FitConfig& config) {
  check_range(n_range);
  if (!generate || replicates == 0) throw StructuralError("the MSE criterion needs a dataset generator");
  require_valid(truth);
  std::vector<GlobalRates> data;
  for (std::size_t r = 0; r < replicates; ++r) data.push_back(generate(r));
  const std::size_t R = replicates;
  const auto flat = parallel_map(n_range.size() * R, config.jobs, [&](std::size_t t) {
    const auto& rates = data[t % R];
    try {
      const auto fit = fit_global(rates, single_threaded(config, n_range[t / R]));
      std::vector<double> ages;
      for (const auto& row : rates.rows) ages.push_back(row.age);
      return curve_mse(truth, fit.model(), ages, rates.class_length);
    } catch (const Error&) {
      return kNaN;
    }
  });
  SelectionReport r;
  r.criterion = "mse";
  r.n_values = n_range;
  for (std::size_t i = 0; i < n_range.size(); ++i) {
    std::vector<double> per(flat.begin() + static_cast<std::ptrdiff_t>(i * R),
                            flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * R));
    r.scores.push_back(mean(per));
    r.per_fold.push_back(std::move(per));
  }
  finish(r);
  return r;
}

}  // namespace mbt
