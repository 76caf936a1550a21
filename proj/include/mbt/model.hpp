#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mbt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Rates of the acyclic Markov-modulated Poisson subclass: phase i ages to
/// i+1 at gamma[i], dies at mu[i] and gives birth at lambda[i].
struct AtmmppParams {
  Vector gamma;   // n-1 aging rates, strictly positive
  Vector mu;      // n death rates
  Vector lambda;  // n birth rates

  int phases() const { return static_cast<int>(mu.size()); }
  static int parameter_count(int n) { return 3 * n - 1; }

  /// Flattened (gamma, mu, lambda), length 3n-1.
  Vector theta() const;
  static AtmmppParams from_theta(int n, const Vector& theta);
};

/// Transient Markovian arrival process (alpha, D0, D1, d) with n phases.
struct TmapModel {
  int n = 0;
  RowVector alpha;
  Matrix D0;
  Matrix D1;
  Vector d;
  std::optional<AtmmppParams> atmmpp;

  /// D = D0 + D1, the generator of the phase process.
  Matrix generator() const { return D0 + D1; }
};

struct Diagnostic {
  std::string invariant;
  int row = -1;
  int col = -1;
  double residual = 0.0;
  std::string message;
};

inline constexpr double kProbabilityTolerance = 1e-12;
inline constexpr double kConservationTolerance = 1e-10;

TmapModel build_atmmpp(const AtmmppParams& params);

/// Lists every violated invariant; empty iff the model is a valid TMAP.
std::vector<Diagnostic> validate(const TmapModel& model);

/// Throws StructuralError describing the first violations, if any.
void require_valid(const TmapModel& model);

}  // namespace mbt
