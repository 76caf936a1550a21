#include "mbt/simulation.hpp"

#include <cmath>
#include <deque>

#include "mbt/errors.hpp"

namespace mbt {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int draw_initial_phase(const TmapModel& model, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  for (int i = 0; i < model.n; ++i) {
    u -= model.alpha[i];
    if (u < 0.0) return i;
  }
  for (int i = model.n - 1; i >= 0; --i)
    if (model.alpha[i] > 0.0) return i;
  return 0;
}

int class_count(double l, double T) {
  const double ratio = T / l;
  const double rounded = std::round(ratio);
  return static_cast<int>(std::abs(ratio - rounded) < 1e-9 ? rounded : std::floor(ratio));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

Trajectory simulate_trajectory(const TmapModel& model, double T, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Trajectory traj;
  traj.horizon = T;
  int phase = draw_initial_phase(model, rng);
  double t = 0.0;
  while (true) {
    const double rate = -model.D0(phase, phase);
    t += std::exponential_distribution<double>(rate)(rng);
    if (!(t < T)) return traj;
    double u = unif(rng) * rate;
    int next = -1;
    bool birth = false;
    for (int j = 0; j < model.n && next < 0; ++j) {
      if (j == phase) continue;
      u -= model.D0(phase, j);
      if (u < 0.0) next = j;
    }
    for (int j = 0; j < model.n && next < 0; ++j) {
      u -= model.D1(phase, j);
      if (u < 0.0) {
        next = j;
        birth = true;
      }
    }
    if (next < 0) {
      traj.death = t;
      return traj;
    }
    if (birth) traj.births.push_back(t);
    phase = next;
  }
}

LifeVector encode_life_vector(const Trajectory& traj, double l, double T) {
  if (!(l > 0.0)) throw StructuralError("class length must be positive");
  const int classes = class_count(l, T);
  const bool dies = traj.death < T;
  // Right-open classes; a death exactly on a boundary belongs to the earlier class.
  const int recorded = dies ? std::max(1, static_cast<int>(std::ceil(traj.death / l))) : classes;
  LifeVector v;
  v.entries.assign(recorded, 0);
  for (double b : traj.births) {
    const auto idx = static_cast<std::size_t>(std::floor(b / l));
    if (idx < v.entries.size()) ++v.entries[idx];
  }
  if (dies) v.entries.push_back(kDeath);
  return v;
}

std::vector<Trajectory> simulate_trajectories(const TmapModel& model, std::size_t N, double T, Rng& rng) {
  require_valid(model);
  if (!(T > 0.0)) throw StructuralError("simulation horizon must be positive");
  std::vector<Trajectory> out;
  out.reserve(N);
  for (std::size_t i = 0; i < N; ++i) out.push_back(simulate_trajectory(model, T, rng));
  return out;
}

LifeVectorSample simulate_sample(const TmapModel& model, const SimConfig& cfg) {
  if (cfg.N < 1) throw StructuralError("simulation needs N >= 1");
  Rng rng(derive_seed(cfg.seed, 0));
  LifeVectorSample sample;
  sample.class_length = cfg.class_length;
  for (const auto& traj : simulate_trajectories(model, cfg.N, cfg.T, rng))
    sample.vectors.push_back(encode_life_vector(traj, cfg.class_length, cfg.T));
  if (cfg.censor_probability > 0.0) {
    Rng mask(derive_seed(cfg.seed, 1));
    sample = inject_censoring(sample, cfg.censor_probability, mask);
  }
  return sample;
}

LifeVectorSample inject_censoring(const LifeVectorSample& sample, double c, Rng& rng) {
  if (!(c >= 0.0 && c <= 1.0)) throw StructuralError("censoring probability must lie in [0, 1]");
  std::bernoulli_distribution mask(c);
  LifeVectorSample out = sample;
  for (auto& v : out.vectors)
    for (int& e : v.entries)
      if (e >= 0 && mask(rng)) e = kCensored;
  return out;
}

GlobalRates aggregate_rates(const LifeVectorSample& sample) {
  validate_sample(sample);
  const double l = sample.class_length;
  std::size_t classes = 0;
  for (const auto& v : sample.vectors) {
    const bool dies = v.entries.back() == kDeath;
    classes = std::max(classes, v.entries.size() - (dies ? 1 : 0));
  }

  GlobalRates rates;
  rates.class_length = l;
  for (std::size_t x = 0; x < classes; ++x) {
    double observed = 0.0, died = 0.0, births = 0.0, births_sq = 0.0;
    for (const auto& v : sample.vectors) {
      const auto& e = v.entries;
      if (x >= e.size() || e[x] < 0) continue;  // dead before, or class censored
      observed += 1.0;
      births += e[x];
      births_sq += static_cast<double>(e[x]) * e[x];
      if (x + 1 < e.size() && e[x + 1] == kDeath) died += 1.0;
    }
    RateRow row;
    row.age = static_cast<double>(x) * l;
    if (observed > 0.0) {
      const double death_prob = died / observed;
      const double mean_births = births / observed;
      double se = 0.0;
      if (observed > 1.0) {
        const double var = std::max(0.0, (births_sq - observed * mean_births * mean_births) / (observed - 1.0));
        se = std::sqrt(var / observed);
      }
      // Class-level quantities to per-year rates (inverse of the class-length
      // correspondence); identity when l = 1.
      double per_year_mortality = death_prob;
      double fertility_scale = 1.0;
      if (l != 1.0) {
        per_year_mortality = 1.0 - std::pow(1.0 - death_prob, 1.0 / l);
        fertility_scale = death_prob > 0.0 ? per_year_mortality / death_prob : 1.0 / l;
      }
      row.mortality = per_year_mortality;
      row.fertility = mean_births * fertility_scale;
      row.fertility_se = se * fertility_scale;
      row.count = observed;
    }
    rates.rows.push_back(row);
  }
  return rates;
}

FamilyTreeResult simulate_family_tree(const TmapModel& model, const TreeCaps& caps, Rng& rng, double founder_age) {
  if (caps.max_population < 1 || !(caps.max_time > 0.0) || !std::isfinite(caps.max_time))
    throw StructuralError("family-tree caps must be finite and positive");
  FamilyTreeResult res;
  std::deque<double> pending;  // birth times of individuals not yet simulated

  Trajectory founder;
  do {
    founder = simulate_trajectory(model, founder_age + caps.max_time, rng);
  } while (!(founder.death > founder_age));
  res.population = 1;
  if (founder.alive_at_horizon()) return res;
  for (double b : founder.births) {
    if (b < founder_age) continue;
    pending.push_back(b - founder_age);
    if (++res.population >= caps.max_population) return res;
  }

  while (!pending.empty()) {
    const double born = pending.front();
    pending.pop_front();
    const Trajectory traj = simulate_trajectory(model, caps.max_time - born, rng);
    if (traj.alive_at_horizon()) return res;
    for (double b : traj.births) {
      pending.push_back(born + b);
      if (++res.population >= caps.max_population) return res;
    }
  }
  res.extinct = true;
  return res;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = [] {
    auto make = [](std::vector<double> g, std::vector<double> m, std::vector<double> l) {
      AtmmppParams p;
      p.gamma = Eigen::Map<Vector>(g.data(), static_cast<Eigen::Index>(g.size()));
      p.mu = Eigen::Map<Vector>(m.data(), static_cast<Eigen::Index>(m.size()));
      p.lambda = Eigen::Map<Vector>(l.data(), static_cast<Eigen::Index>(l.size()));
      return p;
    };
    return std::vector<Preset>{
        {"example1", make({0.25, 0.25}, {0.2, 0.4, 0.9}, {6, 3, 2}), 500, 15.0},
        {"example2", make({0.5, 0.1, 0.1}, {0.3, 0.1, 0.2, 0.7}, {0.5, 2, 0.5, 0.01}), 400, 25.0},
        {"example3", make({0.3, 0.3, 0.3}, {0.6, 0.1, 0.2, 0.5}, {0.2, 3, 2, 0.1}), 500, 15.0},
    };
  }();
  return table;
}

const Preset& preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw StructuralError("unknown preset '" + std::string(name) + "'");
}

}  // namespace mbt
