#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mbt/likelihood.hpp"
#include "mbt/model.hpp"
#include "mbt/rates.hpp"

namespace mbt {

using Rng = std::mt19937_64;

/// Seed of stream `stream` derived from a master seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) { return Rng(derive_seed(seed, stream)); }

struct Trajectory {
  std::vector<double> births;  // sorted birth epochs
  double death = std::numeric_limits<double>::infinity();
  double horizon = 0.0;

  bool alive_at_horizon() const { return !(death < horizon); }
};

struct SimConfig {
  std::size_t N = 500;
  double T = 15.0;
  double class_length = 1.0;
  std::uint64_t seed = 1;
  double censor_probability = 0.0;
};

struct TreeCaps {
  std::size_t max_population = 10'000;  // total individuals generated
  double max_time = 200.0;
};

struct FamilyTreeResult {
  bool extinct = false;
  std::size_t population = 0;  // individuals generated, founder included
};

/// Exact simulation of one lifetime up to horizon T.
Trajectory simulate_trajectory(const TmapModel& model, double T, Rng& rng);

/// Births counted in right-open classes [(i-1)l, il); a death in class j gives
/// j count entries and a terminal -1; alive at T gives T/l entries.
LifeVector encode_life_vector(const Trajectory& traj, double l, double T);

std::vector<Trajectory> simulate_trajectories(const TmapModel& model, std::size_t N, double T, Rng& rng);

/// N encoded life vectors; trajectories drawn from one stream seeded by cfg.seed.
LifeVectorSample simulate_sample(const TmapModel& model, const SimConfig& cfg);

/// Masks each count entry with -2 independently with probability c.
LifeVectorSample inject_censoring(const LifeVectorSample& sample, double c, Rng& rng);

/// Population-average rates of a sample, expressed per year.
GlobalRates aggregate_rates(const LifeVectorSample& sample);

/// Family of one individual whose children start independently in alpha.
/// With founder_age > 0 the founder is conditioned to be alive at that age
/// and only its later births count.
FamilyTreeResult simulate_family_tree(const TmapModel& model, const TreeCaps& caps, Rng& rng,
                                      double founder_age = 0.0);

struct Preset {
  std::string name;
  AtmmppParams params;
  std::size_t N;
  double T;
};

const std::vector<Preset>& presets();
const Preset& preset(std::string_view name);

}  // namespace mbt
