#include "mbt/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mbt/errors.hpp"

namespace mbt {

Vector AtmmppParams::theta() const {
  Vector out(gamma.size() + mu.size() + lambda.size());
  out << gamma, mu, lambda;
  return out;
}

AtmmppParams AtmmppParams::from_theta(int n, const Vector& theta) {
  if (n < 1 || theta.size() != parameter_count(n)) {
    throw StructuralError("theta has length " + std::to_string(theta.size()) + ", expected " +
                          std::to_string(parameter_count(std::max(n, 1))) + " for n=" +
                          std::to_string(n));
  }
  AtmmppParams p;
  p.gamma = theta.head(n - 1);
  p.mu = theta.segment(n - 1, n);
  p.lambda = theta.tail(n);
  return p;
}

TmapModel build_atmmpp(const AtmmppParams& params) {
  const int n = params.phases();
  if (n < 1 || params.lambda.size() != n || params.gamma.size() != n - 1) {
    std::ostringstream os;
    os << "ATMMPP dimension mismatch: |gamma|=" << params.gamma.size() << ", |mu|=" << params.mu.size()
       << ", |lambda|=" << params.lambda.size();
    throw StructuralError(os.str());
  }
  for (int i = 0; i < n - 1; ++i) {
    if (!(params.gamma[i] > 0.0) || !std::isfinite(params.gamma[i]))
      throw StructuralError("gamma[" + std::to_string(i) + "] must be positive and finite");
  }
  for (int i = 0; i < n; ++i) {
    if (!(params.mu[i] >= 0.0) || !std::isfinite(params.mu[i]))
      throw StructuralError("mu[" + std::to_string(i) + "] must be nonnegative and finite");
    if (!(params.lambda[i] >= 0.0) || !std::isfinite(params.lambda[i]))
      throw StructuralError("lambda[" + std::to_string(i) + "] must be nonnegative and finite");
  }

  TmapModel m;
  m.n = n;
  m.alpha = RowVector::Zero(n);
  m.alpha[0] = 1.0;
  m.D1 = params.lambda.asDiagonal();
  m.d = params.mu;
  m.D0 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double aging = i + 1 < n ? params.gamma[i] : 0.0;
    if (i + 1 < n) m.D0(i, i + 1) = aging;
    // Diagonal follows from D0 1 + D1 1 + d = 0.
    m.D0(i, i) = -params.lambda[i] - params.mu[i] - aging;
  }
  m.atmmpp = params;
  return m;
}

std::vector<Diagnostic> validate(const TmapModel& model) {
  std::vector<Diagnostic> out;
  const int n = model.n;
  auto add = [&](std::string inv, int r, int c, double res, std::string msg) {
    out.push_back({std::move(inv), r, c, res, std::move(msg)});
  };
  if (n < 1) {
    add("dimension", -1, -1, 0.0, "phase count must be positive");
    return out;
  }
  if (model.alpha.size() != n || model.D0.rows() != n || model.D0.cols() != n || model.D1.rows() != n ||
      model.D1.cols() != n || model.d.size() != n) {
    add("dimension", -1, -1, 0.0, "alpha, D0, D1, d must have dimensions matching n");
    return out;
  }

  double alpha_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(model.alpha[i] >= 0.0)) add("alpha_nonnegative", 0, i, model.alpha[i], "alpha entry is negative");
    alpha_sum += model.alpha[i];
  }
  if (!(std::abs(alpha_sum - 1.0) <= kProbabilityTolerance))
    add("alpha_sum", -1, -1, alpha_sum - 1.0, "alpha does not sum to one");

  for (int i = 0; i < n; ++i) {
    if (!(model.d[i] >= 0.0)) add("d_nonnegative", i, -1, model.d[i], "death rate is negative");
    for (int j = 0; j < n; ++j) {
      if (!(model.D1(i, j) >= 0.0)) add("D1_nonnegative", i, j, model.D1(i, j), "birth rate is negative");
      if (i == j) {
        if (!(model.D0(i, i) < 0.0))
          add("D0_diagonal_negative", i, i, model.D0(i, i), "D0 diagonal must be strictly negative");
      } else if (!(model.D0(i, j) >= 0.0)) {
        add("D0_offdiagonal_nonnegative", i, j, model.D0(i, j), "hidden transition rate is negative");
      }
    }
    const double residual = model.D0.row(i).sum() + model.D1.row(i).sum() + model.d[i];
    if (!(std::abs(residual) <= kConservationTolerance))
      add("row_conservation", i, -1, residual, "D0 1 + D1 1 + d is not zero");
  }
  return out;
}

void require_valid(const TmapModel& model) {
  const auto diags = validate(model);
  if (diags.empty()) return;
  std::ostringstream os;
  os << "invalid TMAP model:";
  for (const auto& d : diags) {
    os << " [" << d.invariant;
    if (d.row >= 0) os << " row " << d.row;
    if (d.col >= 0) os << " col " << d.col;
    os << " residual " << d.residual << "]";
  }
  throw StructuralError(os.str());
}

}  // namespace mbt
