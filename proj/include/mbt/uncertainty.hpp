#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mbt/likelihood.hpp"
#include "mbt/model.hpp"
#include "mbt/simulation.hpp"

namespace mbt {

enum class BandMethod { resample, bootstrap, delta };
enum class BandKind { mean_sd, quantile };

std::string to_string(BandMethod m);

struct ConfidenceBand {
  std::vector<double> ages;
  std::vector<double> estimate;
  std::vector<double> lower;
  std::vector<double> upper;
  double level = 0.95;
  BandMethod method = BandMethod::bootstrap;
  BandKind kind = BandKind::mean_sd;
  int replicates = 0;
  int failures = 0;
  // Delta method diagnostics.
  bool clipped = false;   // information matrix was not positive definite
  bool boundary = false;  // some rate sits near zero; the band is unreliable
  std::optional<Matrix> covariance;  // of theta, natural coordinates

  double mean_width() const;
};

/// Output curve of a model evaluated on the band's ages.
using OutputFn = std::function<std::vector<double>(const TmapModel&)>;
/// Estimator run on one dataset.
using SampleFitFn = std::function<TmapModel(const LifeVectorSample&)>;

struct BandConfig {
  int B = 25;
  std::uint64_t seed = 1;
  int jobs = 1;
  double level = 0.95;
  BandKind kind = BandKind::mean_sd;
};

/// Two-sided standard normal quantile for `level` (1.96 at 0.95).
double normal_quantile(double level);

/// Pointwise mean +- z sd (or empirical quantiles) of replicate curves.
ConfidenceBand band_from_replicates(const std::vector<std::vector<double>>& curves, const std::vector<double>& ages,
                                    double level, BandKind kind);

/// B datasets simulated from the truth with `sim` (seed of replicate b
/// derived from config.seed), each fitted and evaluated.
ConfidenceBand band_resample(const TmapModel& truth, const SimConfig& sim, const SampleFitFn& fit,
                             const OutputFn& output, const std::vector<double>& ages, const BandConfig& config);

/// B resamples with replacement of the sample.
ConfidenceBand band_bootstrap(const LifeVectorSample& sample, const SampleFitFn& fit, const OutputFn& output,
                              const std::vector<double>& ages, const BandConfig& config);

/// g(theta) +- z sqrt(grad g J^{-1} grad g') with J the observed information,
/// both derivatives by central differences in log-rates.
ConfidenceBand band_delta(const LifeVectorSample& sample, const AtmmppParams& theta_hat, const OutputFn& output,
                          const std::vector<double>& ages, double level = 0.95);

}  // namespace mbt
