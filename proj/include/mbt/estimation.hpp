#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mbt/likelihood.hpp"
#include "mbt/model.hpp"
#include "mbt/rates.hpp"

namespace mbt {

/// Class-level targets: the probability of dying within a class and the
/// expected births in it. For l > 1 they are the model equivalents of the
/// per-year rates; fertility is dropped when the class mortality is missing.
struct ClassTarget {
  std::optional<double> mortality;
  std::optional<double> fertility;
};

std::vector<ClassTarget> class_targets(const GlobalRates& rates);

enum class WeightScheme { survival, counts };

/// S_0 = 1, S_x = prod_{y<x} (1 - d_y) over class-level death probabilities;
/// a missing mortality counts as zero.
std::vector<double> survival_weights(const GlobalRates& rates);

/// W_x = n_x; classes without a count get weight zero.
std::vector<double> count_weights(const GlobalRates& rates);

std::vector<double> make_weights(const GlobalRates& rates, WeightScheme scheme);

/// Weighted squared distance between model curves and the (class-level) rate
/// targets. Missing targets contribute nothing.
double objective_global(const TmapModel& model, const GlobalRates& rates, const std::vector<double>& weights);
double objective_global(const AtmmppParams& params, const GlobalRates& rates, const std::vector<double>& weights);

/// Starting point: gamma_i = n / ((M+1) l), lambda_i and mu_i the averages of
/// the observed fertility and mortality rates over the M+1 classes.
AtmmppParams seed_params(int n, const GlobalRates& rates);
AtmmppParams seed_params(int n, const LifeVectorSample& sample);

struct FitConfig {
  int n = 1;
  int seeds = 25;
  double noise = 0.25;  // log-normal jitter scale for seeds after the first
  double ftol = 1e-10;
  double xtol = 1e-8;
  int max_iter = 10'000;
  std::uint64_t rng_seed = 1;
  int jobs = 1;
  WeightScheme weights = WeightScheme::survival;
};

struct SeedTrace {
  int index = 0;
  bool converged = false;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  AtmmppParams start;
  AtmmppParams end;
  bool flat = false;
  std::string error;
};

struct FitResult {
  AtmmppParams params;
  double objective = 0.0;  // F for global data, -log-likelihood for life vectors
  std::vector<SeedTrace> trace;
  int winner = 0;
  bool flat = false;  // objective was constant around the starting point

  TmapModel model() const;
};

/// The starting points of the multi-start protocol: the recipe first, then
/// multiplicative log-normal jitter from stream (rng_seed, s).
std::vector<AtmmppParams> multistart_seeds(const AtmmppParams& recipe, const FitConfig& config);

/// Minimizes objective(model) over log-rates from every seed; the best
/// converged seed wins, ties to the lowest index.
FitResult fit_multistart(const AtmmppParams& recipe, const std::function<double(const TmapModel&)>& objective,
                         const FitConfig& config);

FitResult fit_global(const GlobalRates& rates, const FitConfig& config);
FitResult fit_individual(const LifeVectorSample& sample, const FitConfig& config);

/// Precomputed view of a sample for repeated likelihood evaluation: identical
/// vectors are evaluated once and weighted by multiplicity.
class SampleLikelihood {
 public:
  explicit SampleLikelihood(const LifeVectorSample& sample);

  /// Sum of log probabilities, kLogZero if any vector has probability zero.
  double operator()(const TmapModel& model) const;
  int max_count() const { return max_count_; }

 private:
  std::vector<LifeVector> unique_;
  std::vector<double> multiplicity_;
  double class_length_;
  int max_count_;
};

}  // namespace mbt
