#pragma once

#include "mbt/model.hpp"

namespace mbt {

struct MatrixExpOptions {
  enum class Method { scaling_and_squaring };
  Method method = Method::scaling_and_squaring;
  double tolerance = 1e-13;
};

/// exp(A t) by scaling and squaring with the degree-13 Pade approximant.
Matrix matrix_exp(const Matrix& a, double t, const MatrixExpOptions& opts = {});

}  // namespace mbt
