#include "mbt/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "mbt/errors.hpp"

namespace mbt {
namespace {

struct Simplex {
  std::vector<Vector> x;
  std::vector<double> f;

  void sort() {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    std::vector<Vector> xs;
    std::vector<double> fs;
    for (auto i : idx) {
      xs.push_back(std::move(x[i]));
      fs.push_back(f[i]);
    }
    x = std::move(xs);
    f = std::move(fs);
  }

  double diameter() const {
    double d = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) d = std::max(d, (x[i] - x[0]).cwiseAbs().maxCoeff());
    return d;
  }
};

double sanitize(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                             const NelderMeadOptions& opts) {
  const int dim = static_cast<int>(x0.size());
  if (dim < 1) throw StructuralError("nelder_mead needs at least one coordinate");
  if (!(opts.ftol > 0.0) || !(opts.xtol > 0.0)) throw StructuralError("nelder_mead tolerances must be positive");

  // Gao-Han coefficients keep the method effective in higher dimensions.
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dim;
  const double contract = 0.75 - 1.0 / (2.0 * dim);
  const double shrink = 1.0 - 1.0 / dim;

  NelderMeadResult res;
  auto eval = [&](const Vector& x) {
    ++res.evaluations;
    return sanitize(f(x));
  };

  Vector best = x0;
  double best_value = eval(best);
  bool first_round = true;

  for (int round = 0; round <= opts.max_restarts; ++round) {
    Simplex s;
    s.x.push_back(best);
    s.f.push_back(best_value);
    for (int i = 0; i < dim; ++i) {
      Vector xi = best;
      xi[i] += opts.initial_step;
      s.x.push_back(xi);
      s.f.push_back(eval(xi));
    }
    if (first_round &&
        std::all_of(s.f.begin(), s.f.end(), [&](double v) { return v == s.f.front(); })) {
      res.x = best;
      res.value = best_value;
      res.flat = true;
      res.converged = true;
      return res;
    }
    first_round = false;

    bool tolerance_hit = false;
    while (res.iterations < opts.max_iter) {
      s.sort();
      const double spread = s.f[dim] - s.f[0];
      if ((std::isfinite(spread) && spread <= opts.ftol * (1.0 + std::abs(s.f[0]))) || s.diameter() <= opts.xtol) {
        tolerance_hit = true;
        break;
      }
      ++res.iterations;

      Vector centroid = Vector::Zero(dim);
      for (int i = 0; i < dim; ++i) centroid += s.x[i];
      centroid /= dim;
      const Vector& worst = s.x[dim];

      const Vector xr = centroid + reflect * (centroid - worst);
      const double fr = eval(xr);
      if (fr < s.f[0]) {
        const Vector xe = centroid + expand * (xr - centroid);
        const double fe = eval(xe);
        if (fe < fr) {
          s.x[dim] = xe;
          s.f[dim] = fe;
        } else {
          s.x[dim] = xr;
          s.f[dim] = fr;
        }
        continue;
      }
      if (fr < s.f[dim - 1]) {
        s.x[dim] = xr;
        s.f[dim] = fr;
        continue;
      }
      const bool outside = fr < s.f[dim];
      const Vector xc = outside ? Vector(centroid + contract * (xr - centroid))
                                : Vector(centroid + contract * (worst - centroid));
      const double fc = eval(xc);
      if (fc < (outside ? fr : s.f[dim])) {
        s.x[dim] = xc;
        s.f[dim] = fc;
        continue;
      }
      for (int i = 1; i <= dim; ++i) {
        s.x[i] = s.x[0] + shrink * (s.x[i] - s.x[0]);
        s.f[i] = eval(s.x[i]);
      }
    }
    s.sort();
    const double improvement = best_value - s.f[0];
    const bool improved = s.f[0] < best_value;
    if (improved) {
      best = s.x[0];
      best_value = s.f[0];
    }
    res.restarts = round;
    if (!tolerance_hit) break;  // iteration budget exhausted
    if (round > 0 && !(improvement > opts.ftol * (1.0 + std::abs(best_value)))) {
      res.converged = true;
      break;
    }
  }
  res.x = best;
  res.value = best_value;
  return res;
}

}  // namespace mbt
