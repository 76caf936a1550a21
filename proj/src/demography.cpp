#include "mbt/demography.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "mbt/errors.hpp"
#include "mbt/matrix_exp.hpp"

namespace mbt {
namespace {

Vector solve_minus_generator(const Matrix& D, const Vector& rhs) {
  Eigen::PartialPivLU<Matrix> lu(-D);
  if (!(lu.rcond() > 1e-14)) {
    throw NumericError(
        "generator D = D0 + D1 is singular: some phases can never be left by death, so the model has a "
        "recurrent class among its transient phases");
  }
  return lu.solve(rhs);
}

void check_age(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw StructuralError("age must be finite and nonnegative");
}

void check_class_length(double l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw StructuralError("class length must be positive and finite");
}

[[noreturn]] void throw_underflow(double x, double s) {
  std::ostringstream os;
  os << "survival at age " << x << " is " << s << ", below the numeric support of conditional rates";
  throw UnderflowError(os.str());
}

}  // namespace

AgeGrid AgeGrid::uniform(double max_age, double class_length, double step) {
  if (!(step > 0.0)) throw StructuralError("grid step must be positive");
  AgeGrid g;
  g.class_length = class_length;
  const long count = static_cast<long>(std::floor(max_age / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) g.ages.push_back(static_cast<double>(i) * step);
  return g;
}

double survival(const TmapModel& model, double x) {
  require_valid(model);
  check_age(x);
  const double s = (model.alpha * matrix_exp(model.generator(), x)).sum();
  return std::clamp(s, 0.0, 1.0);
}

double mortality_rate(const TmapModel& model, double x, double l) {
  return CurveEvaluator(model, l).evaluate({x}).mortality.front();
}

double fertility_rate(const TmapModel& model, double x, double l) {
  return CurveEvaluator(model, l).evaluate({x}).fertility.front();
}

RateEquivalents rates_model_equivalents(double beta_hat, double mu_hat, double l) {
  if (!(mu_hat >= 0.0 && mu_hat <= 1.0)) throw StructuralError("mortality rate must lie in [0, 1]");
  if (!(beta_hat >= 0.0)) throw StructuralError("fertility rate must be nonnegative");
  if (!(l >= 1.0) || std::abs(l - std::round(l)) > 1e-9)
    throw StructuralError("class length must be a positive integer number of base time units");
  if (mu_hat == 0.0) return {0.0, beta_hat * l};
  const double survive = std::pow(1.0 - mu_hat, l);
  return {1.0 - survive, beta_hat * (1.0 - survive) / mu_hat};
}

CurveEvaluator::CurveEvaluator(const TmapModel& model, double class_length)
    : model_(model), class_length_(class_length) {
  require_valid(model_);
  check_class_length(class_length_);
  // exp of [D d D1 1; 0 0 0; 0 0 0] carries int_0^l e^{Du} du applied to the
  // death and birth rates, which equal (I - e^{Dl}) 1 and
  // (I - e^{Dl}) (-D)^{-1} D1 1 but need no inverse of D.
  const int n = model_.n;
  Matrix aug = Matrix::Zero(n + 2, n + 2);
  aug.topLeftCorner(n, n) = model_.generator();
  aug.col(n).head(n) = model_.d;
  aug.col(n + 1).head(n) = model_.D1.rowwise().sum();
  const Matrix e = matrix_exp(aug, class_length_);
  death_within_ = e.col(n).head(n);
  births_within_ = e.col(n + 1).head(n);
}

DemographicCurves CurveEvaluator::evaluate(const std::vector<double>& ages) const {
  DemographicCurves out;
  out.ages = ages;
  if (ages.empty()) return out;
  const Matrix D = model_.generator();
  std::map<double, Matrix> step_cache;
  RowVector a;
  for (std::size_t k = 0; k < ages.size(); ++k) {
    check_age(ages[k]);
    if (k == 0) {
      a = model_.alpha * matrix_exp(D, ages[0]);
    } else {
      const double step = ages[k] - ages[k - 1];
      if (!(step > 0.0)) throw StructuralError("ages must be strictly increasing");
      auto it = step_cache.find(step);
      if (it == step_cache.end()) it = step_cache.emplace(step, matrix_exp(D, step)).first;
      a = a * it->second;
    }
    const double s = a.sum();
    if (!(s >= kSurvivalFloor)) throw_underflow(ages[k], s);
    out.survival.push_back(std::clamp(s, 0.0, 1.0));
    out.mortality.push_back(std::clamp(a.dot(death_within_) / s, 0.0, 1.0));
    out.fertility.push_back(std::max(a.dot(births_within_) / s, 0.0));
  }
  return out;
}

DemographicCurves curves(const TmapModel& model, const AgeGrid& grid) {
  return CurveEvaluator(model, grid.class_length).evaluate(grid.ages);
}

Vector extinction_vector(const TmapModel& model, double tol, long max_iter, ExtinctionMethod method) {
  require_valid(model);
  if (!(tol > 0.0)) throw StructuralError("extinction tolerance must be positive");
  const int n = model.n;
  const Vector exit_rate = -model.D0.diagonal();
  Matrix hidden = model.D0;
  hidden.diagonal().setZero();

  // Fixed point q = F(q) with F(q) = (-diag D0)^{-1} [d + offdiag(D0) q + (alpha q) D1 q],
  // equivalently G(q) = d + D0 q + (alpha q) D1 q = 0.
  auto functional_step = [&](const Vector& q) {
    const double child = model.alpha.dot(q);
    return Vector((model.d + hidden * q + child * (model.D1 * q)).cwiseQuotient(exit_rate));
  };
  auto newton_step = [&](const Vector& q) -> std::optional<Vector> {
    const double child = model.alpha.dot(q);
    const Vector born = model.D1 * q;
    const Vector g = model.d + model.D0 * q + child * born;
    const Matrix jac = model.D0 + child * model.D1 + born * model.alpha;
    Eigen::PartialPivLU<Matrix> lu(jac);
    if (!(lu.rcond() > 1e-300)) return std::nullopt;
    Vector next = q - lu.solve(g);
    if (!next.allFinite()) return std::nullopt;
    return next;
  };

  // Children all start in alpha, so generations form a single-type
  // Galton-Watson process with mean alpha (-D)^{-1} D1 1: at or below one,
  // extinction is certain from every phase. This settles the critical case,
  // whose double root no residual-based iteration resolves beyond sqrt(eps).
  if (method == ExtinctionMethod::newton) {
    Eigen::PartialPivLU<Matrix> lu(-model.generator());
    if (lu.rcond() > 1e-14 && model.alpha.dot(lu.solve(model.D1.rowwise().sum())) <= 1.0 + 1e-12)
      return Vector::Ones(n);
  }

  Vector q = Vector::Zero(n);
  double change = 0.0;
  for (long it = 0; it < max_iter; ++it) {
    std::optional<Vector> step;
    if (method == ExtinctionMethod::newton) step = newton_step(q);
    Vector next = step ? std::move(*step) : functional_step(q);
    // Iterates increase from zero; rounding must not push them down or past one.
    next = next.cwiseMax(q).cwiseMin(1.0);
    change = (next - q).cwiseAbs().maxCoeff();
    q = std::move(next);
    if (change < tol) return q;
  }
  std::ostringstream os;
  os << "extinction iteration did not converge in " << max_iter << " steps (last change " << change << ")";
  throw IterationError(os.str(), change);
}

double extinction_by_initial_age(const TmapModel& model, double x, const Vector& q) {
  require_valid(model);
  check_age(x);
  if (q.size() != model.n) throw StructuralError("extinction vector has wrong length");
  const RowVector a = model.alpha * matrix_exp(model.generator(), x);
  const double s = a.sum();
  if (!(s >= kSurvivalFloor)) throw_underflow(x, s);
  return std::clamp(a.dot(q) / s, 0.0, 1.0);
}

double extinction_by_initial_age(const TmapModel& model, double x) {
  return extinction_by_initial_age(model, x, extinction_vector(model));
}

double mean_offspring(const TmapModel& model) {
  require_valid(model);
  return model.alpha.dot(solve_minus_generator(model.generator(), model.D1.rowwise().sum()));
}

}  // namespace mbt
