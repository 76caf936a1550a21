#pragma once

#include <map>
#include <vector>

#include "mbt/model.hpp"

namespace mbt {

/// Survival probability below which conditional rates are not evaluated.
inline constexpr double kSurvivalFloor = 1e-300;

struct AgeGrid {
  std::vector<double> ages;  // strictly increasing, nonnegative
  double class_length = 1.0;

  /// Ages 0, step, 2 step, ..., up to max_age inclusive.
  static AgeGrid uniform(double max_age, double class_length, double step = 1.0);
};

struct DemographicCurves {
  std::vector<double> ages;
  std::vector<double> mortality;  // d(x, l)
  std::vector<double> fertility;  // b(x, l)
  std::vector<double> survival;   // S(x)
};

/// P[L > x] = alpha e^{Dx} 1.
double survival(const TmapModel& model, double x);

/// Probability of dying within [x, x+l) given alive at x.
double mortality_rate(const TmapModel& model, double x, double l);

/// Expected births within [x, x+l) given alive at x.
double fertility_rate(const TmapModel& model, double x, double l);

struct RateEquivalents {
  double mortality;  // class-level death probability
  double fertility;  // expected births over the class
};

/// Converts per-year rates observed over an l-year class to the class-level
/// quantities that the model's d(x, l) and b(x, l) are compared against.
RateEquivalents rates_model_equivalents(double beta_hat, double mu_hat, double l);

/// Evaluates curves on a grid, reusing e^{D l}, (I - e^{D l}) 1 and
/// (I - e^{D l}) (-D)^{-1} D1 1 across ages and propagating alpha e^{Dx}
/// with cached step exponentials.
class CurveEvaluator {
 public:
  CurveEvaluator(const TmapModel& model, double class_length);

  DemographicCurves evaluate(const std::vector<double>& ages) const;
  const TmapModel& model() const { return model_; }

 private:
  TmapModel model_;
  double class_length_;
  Vector death_within_;   // (I - e^{Dl}) 1
  Vector births_within_;  // (I - e^{Dl}) (-D)^{-1} D1 1
};

DemographicCurves curves(const TmapModel& model, const AgeGrid& grid);

enum class ExtinctionMethod { newton, functional };

/// Minimal nonnegative solution of the branching fixed point, per starting
/// phase. Both methods start from zero and increase monotonically; they stop
/// when successive iterates differ by less than tol. Functional iteration
/// slows to O(1/k) at criticality; the Newton path first returns ones when the
/// mean offspring is at most one. Children start in alpha.
Vector extinction_vector(const TmapModel& model, double tol = 1e-12, long max_iter = 1'000'000,
                         ExtinctionMethod method = ExtinctionMethod::newton);

/// Extinction probability of the family of an individual known to be alive
/// at age x, counting only births from age x onward.
double extinction_by_initial_age(const TmapModel& model, double x, const Vector& q);
double extinction_by_initial_age(const TmapModel& model, double x);

/// Mean number of children per individual, alpha (-D)^{-1} D1 1. Every child
/// starts afresh in alpha, so the family is subcritical iff this is <= 1.
double mean_offspring(const TmapModel& model);

}  // namespace mbt
