#pragma once

// Independent reference computations used to pin library outputs.

#include <vector>

#include "mbt/likelihood.hpp"
#include "mbt/model.hpp"

namespace oracle {

/// exp(A t) by a 200-term Taylor series accumulated in long double, with
/// scaling by 2^s so the series argument has norm below 1.
mbt::Matrix taylor_expm(const mbt::Matrix& a, double t, int terms = 200);

/// Kernels from the literal construction: the generator with D0 on the
/// diagonal and k D1 on the k-th subdiagonal block, its exponential taken
/// with the Taylor oracle, and the 1/k! extraction.
mbt::CountKernels literal_kernels(const mbt::TmapModel& model, double l, int K);

/// Truncated brute-force mass of a class: tail symbols are summed over
/// counts K+1..kernels.K explicitly.
double brute_force_class_mass(const mbt::TmapModel& model, const mbt::MsilClassVector& c,
                              const mbt::CountKernels& kernels);

/// Simpson quadrature of int_0^l f(u) du on `panels` panels.
template <class F>
double simpson(F&& f, double a, double b, int panels = 2000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Fraction of z-scores within `k` standard errors.
double fraction_within(const std::vector<double>& z, double k = 3.0);

}  // namespace oracle
