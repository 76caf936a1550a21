#include "mbt/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "mbt/errors.hpp"
#include "mbt/estimation.hpp"
#include "mbt/parallel.hpp"

namespace mbt {
namespace {

constexpr double kClip = 1e-8;
constexpr double kBoundaryRate = 1e-6;

double step_for(double z) { return 1e-4 * (1.0 + std::abs(z)); }

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

void check_config(const BandConfig& c) {
  if (c.B < 2) throw StructuralError("bands need at least two replicates");
  if (!(c.level > 0.0 && c.level < 1.0)) throw StructuralError("level must lie in (0, 1)");
}

ConfidenceBand collect(const std::vector<std::optional<std::vector<double>>>& runs, const std::vector<double>& ages,
                       const BandConfig& config, BandMethod method) {
  std::vector<std::vector<double>> ok;
  for (const auto& r : runs)
    if (r) ok.push_back(*r);
  if (ok.size() < 2) throw OptimizationError("fewer than two replicate fits succeeded");
  auto band = band_from_replicates(ok, ages, config.level, config.kind);
  band.method = method;
  band.replicates = static_cast<int>(runs.size());
  band.failures = static_cast<int>(runs.size() - ok.size());
  return band;
}

}  // namespace

std::string to_string(BandMethod m) {
  switch (m) {
    case BandMethod::resample: return "resample";
    case BandMethod::bootstrap: return "bootstrap";
    case BandMethod::delta: return "delta";
  }
  return "unknown";
}

double ConfidenceBand::mean_width() const {
  if (ages.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < ages.size(); ++i) s += upper[i] - lower[i];
  return s / static_cast<double>(ages.size());
}

double normal_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) throw StructuralError("level must lie in (0, 1)");
  if (level == 0.95) return 1.959963984540054;
  // P(|Z| <= z) = erf(z / sqrt 2); bisection is plenty for a one-off.
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erf(mid / std::sqrt(2.0)) < level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ConfidenceBand band_from_replicates(const std::vector<std::vector<double>>& curves, const std::vector<double>& ages,
                                    double level, BandKind kind) {
  if (curves.size() < 2) throw StructuralError("bands need at least two curves");
  const std::size_t A = ages.size();
  for (const auto& c : curves)
    if (c.size() != A) throw StructuralError("replicate curve length differs from the age grid");
  ConfidenceBand b;
  b.ages = ages;
  b.level = level;
  b.kind = kind;
  const double z = normal_quantile(level);
  const auto R = static_cast<double>(curves.size());
  for (std::size_t x = 0; x < A; ++x) {
    std::vector<double> col;
    for (const auto& c : curves) col.push_back(c[x]);
    double m = 0.0;
    for (double v : col) m += v;
    m /= R;
    double ss = 0.0;
    for (double v : col) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / (R - 1.0));
    b.estimate.push_back(m);
    if (kind == BandKind::mean_sd) {
      b.lower.push_back(m - z * sd);
      b.upper.push_back(m + z * sd);
    } else {
      const double a = 0.5 * (1.0 - level);
      b.lower.push_back(std::min(m, quantile(col, a)));
      b.upper.push_back(std::max(m, quantile(col, 1.0 - a)));
    }
  }
  return b;
}

ConfidenceBand band_resample(const TmapModel& truth, const SimConfig& sim, const SampleFitFn& fit,
                             const OutputFn& output, const std::vector<double>& ages, const BandConfig& config) {
  check_config(config);
  require_valid(truth);
  const auto runs = parallel_map(static_cast<std::size_t>(config.B), config.jobs,
                                 [&](std::size_t b) -> std::optional<std::vector<double>> {
                                   SimConfig c = sim;
                                   c.seed = derive_seed(config.seed, b);
                                   try {
                                     return output(fit(simulate_sample(truth, c)));
                                   } catch (const Error&) {
                                     return std::nullopt;
                                   }
                                 });
  return collect(runs, ages, config, BandMethod::resample);
}

ConfidenceBand band_bootstrap(const LifeVectorSample& sample, const SampleFitFn& fit, const OutputFn& output,
                              const std::vector<double>& ages, const BandConfig& config) {
  check_config(config);
  validate_sample(sample);
  if (sample.size() == 0) throw StructuralError("cannot bootstrap an empty sample");
  const auto runs = parallel_map(static_cast<std::size_t>(config.B), config.jobs,
                                 [&](std::size_t b) -> std::optional<std::vector<double>> {
                                   Rng rng = make_rng(config.seed, b);
                                   LifeVectorSample s;
                                   s.class_length = sample.class_length;
                                   s.vectors.reserve(sample.size());
                                   for (std::size_t i = 0; i < sample.size(); ++i)
                                     s.vectors.push_back(sample.vectors[rng() % sample.size()]);
                                   try {
                                     return output(fit(s));
                                   } catch (const Error&) {
                                     return std::nullopt;
                                   }
                                 });
  return collect(runs, ages, config, BandMethod::bootstrap);
}

ConfidenceBand band_delta(const LifeVectorSample& sample, const AtmmppParams& theta_hat, const OutputFn& output,
                          const std::vector<double>& ages, double level) {
  const SampleLikelihood loglik(sample);
  const int n = theta_hat.phases();
  const Vector theta = theta_hat.theta();
  if ((theta.array() <= 0.0).any()) throw StructuralError("delta method needs positive rates");
  const Vector z0 = theta.array().log().matrix();
  const auto p = z0.size();
  auto model_at = [&](const Vector& z) { return build_atmmpp(AtmmppParams::from_theta(n, z.array().exp().matrix())); };
  auto L = [&](const Vector& z) {
    const double v = loglik(model_at(z));
    if (v == kLogZero) throw NumericError("log-likelihood is -infinity near the estimate");
    return v;
  };

  Vector h(p);
  for (Eigen::Index i = 0; i < p; ++i) h[i] = step_for(z0[i]);
  const double f0 = L(z0);
  Matrix H(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    Vector zp = z0, zm = z0;
    zp[i] += h[i];
    zm[i] -= h[i];
    H(i, i) = (L(zp) - 2.0 * f0 + L(zm)) / (h[i] * h[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      Vector a = z0, b = z0, c = z0, d = z0;
      a[i] += h[i], a[j] += h[j];
      b[i] += h[i], b[j] -= h[j];
      c[i] -= h[i], c[j] += h[j];
      d[i] -= h[i], d[j] -= h[j];
      H(i, j) = H(j, i) = (L(a) - L(b) - L(c) + L(d)) / (4.0 * h[i] * h[j]);
    }
  }
  const Matrix J = -H;

  ConfidenceBand band;
  band.ages = ages;
  band.level = level;
  band.method = BandMethod::delta;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(J);
  Vector ev = eig.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) throw NumericError("observed information has no positive eigenvalue");
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < kClip * top) {
      ev[i] = kClip * top;
      band.clipped = true;
    }
  }
  const Matrix cov_z = eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  band.covariance = theta.asDiagonal() * cov_z * theta.asDiagonal();
  band.boundary = (theta.array() < kBoundaryRate).any();

  const auto g0 = output(model_at(z0));
  if (g0.size() != ages.size()) throw StructuralError("output length differs from the age grid");
  Matrix grad(static_cast<Eigen::Index>(ages.size()), p);
  for (Eigen::Index i = 0; i < p; ++i) {
    Vector zp = z0, zm = z0;
    zp[i] += h[i];
    zm[i] -= h[i];
    const auto gp = output(model_at(zp));
    const auto gm = output(model_at(zm));
    for (std::size_t x = 0; x < ages.size(); ++x)
      grad(static_cast<Eigen::Index>(x), i) = (gp[x] - gm[x]) / (2.0 * h[i]);
  }
  const double zq = normal_quantile(level);
  for (std::size_t x = 0; x < ages.size(); ++x) {
    const Vector gx = grad.row(static_cast<Eigen::Index>(x)).transpose();
    const double var = std::max(0.0, gx.dot(cov_z * gx));
    const double half = zq * std::sqrt(var);
    band.estimate.push_back(g0[x]);
    band.lower.push_back(g0[x] - half);
    band.upper.push_back(g0[x] + half);
  }
  band.replicates = 0;
  return band;
}

}  // namespace mbt
