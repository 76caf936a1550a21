#pragma once

#include <functional>

#include "mbt/model.hpp"

namespace mbt {

struct NelderMeadOptions {
  double ftol = 1e-10;        // relative spread of simplex values
  double xtol = 1e-8;         // simplex diameter (max-norm)
  int max_iter = 10'000;      // total iterations across restarts
  double initial_step = 0.1;  // per coordinate
  int max_restarts = 50;
};

struct NelderMeadResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  int restarts = 0;
  bool converged = false;
  bool flat = false;  // every point of the initial simplex had the same value
};

/// Adaptive-coefficient Nelder-Mead simplex minimizer, restarted from the
/// best vertex until a restart improves the value by less than ftol.
NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                             const NelderMeadOptions& opts = {});

}  // namespace mbt
