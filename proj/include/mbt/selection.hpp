#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mbt/estimation.hpp"
#include "mbt/likelihood.hpp"
#include "mbt/rates.hpp"

namespace mbt {

struct SelectionReport {
  std::string criterion;  // aic | cv | msil | mse
  std::vector<int> n_values;
  std::vector<double> scores;                // NaN for failed n
  std::vector<std::vector<double>> per_fold;  // cv and msil only
  int chosen_n = 0;
  std::size_t exclusions = 0;  // msil: vectors or segments left out of the empirical term
  std::vector<int> failed;     // n whose fits failed
  bool minimize = true;
  std::optional<int> K;  // msil partition
  std::optional<int> M;
  double max_mass_deviation = 0.0;  // msil: max |sum of class masses - 1| over fits
};

/// Picks the best finite score, ties to the smallest n. Throws
/// OptimizationError when every n failed.
int choose_n(const std::vector<int>& n_values, const std::vector<double>& scores, bool minimize);

/// AIC = 2(3n-1) - 2 logL, minimized.
SelectionReport aic(const LifeVectorSample& sample, const std::vector<int>& n_range, const FitConfig& config);

/// Exact cover of 0..N-1 by `folds` test sets from a shuffle seeded by `seed`.
std::vector<std::vector<std::size_t>> fold_partition(std::size_t N, int folds, std::uint64_t seed);

/// Fits on the complement of every fold for every n; shared by CV and MSIL.
struct FoldFits {
  std::vector<int> n_values;
  std::vector<std::vector<std::size_t>> folds;
  std::vector<std::vector<std::optional<TmapModel>>> models;  // [n][fold], empty on failure
};

FoldFits fit_folds(const LifeVectorSample& sample, const std::vector<int>& n_range, int folds,
                   const FitConfig& config);

LifeVectorSample subsample(const LifeVectorSample& sample, const std::vector<std::size_t>& indices);

/// Mean held-out log-likelihood per vector, maximized. A fold with a
/// zero-probability held-out vector scores -infinity.
SelectionReport cross_validate(const LifeVectorSample& sample, const FoldFits& fits);
SelectionReport cross_validate(const LifeVectorSample& sample, const std::vector<int>& n_range, int folds,
                               const FitConfig& config);

/// Cross-validated estimate of E[sum f_n^2] - 2 E[sum f f_n] over the (K, M)
/// partition, minimized.
SelectionReport msil_select(const LifeVectorSample& sample, const FoldFits& fits, int K, int M);
SelectionReport msil_select(const LifeVectorSample& sample, const std::vector<int>& n_range, int folds, int K,
                            int M, const FitConfig& config);

struct MsilPartition {
  int K = 0;
  int M = 1;
};

/// M = ceil(sum_{x>=1} S_x) + 1 and K + 1 = ceil(max_{1<=x<=M} b_x).
MsilPartition partition_mk1(const GlobalRates& rates);
/// M = min{x : S_x < p} + 1 and K + 1 = ceil(max_{1<=x<=M} (b_x + se_x)).
MsilPartition partition_mk2(const GlobalRates& rates, double p);

/// MSE of global-data fits against known curves, averaged over replicates
/// drawn from `generate(replicate)`, minimized.
SelectionReport mse_global(const TmapModel& truth, const std::vector<int>& n_range,
                           const std::function<GlobalRates(std::size_t)>& generate, std::size_t replicates,
                           const FitConfig& config);

/// Weighted curve distance sum_x ((d - d')^2 + (b - b')^2) S(x) of the fit
/// from the truth, S being the true survival.
double curve_mse(const TmapModel& truth, const TmapModel& fit, const std::vector<double>& ages, double l);

}  // namespace mbt
