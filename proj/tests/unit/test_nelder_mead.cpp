#include <doctest.h>

#include <cmath>

#include "mbt/nelder_mead.hpp"

using namespace mbt;

TEST_SUITE("nelder_mead") {
  TEST_CASE("quadratic bowl") {
    auto f = [](const Vector& x) { return (x.array() - 1.5).square().sum(); };
    const auto r = nelder_mead(f, Vector::Zero(4));
    CHECK(r.converged);
    CHECK((r.x.array() - 1.5).abs().maxCoeff() < 1e-4);
    CHECK(r.value < 1e-8);
  }

  TEST_CASE("rosenbrock") {
    auto f = [](const Vector& x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); };
    Vector x0(2);
    x0 << -1.2, 1.0;
    NelderMeadOptions o;
    o.ftol = 1e-14;
    o.xtol = 1e-10;
    const auto r = nelder_mead(f, x0, o);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
  }

  TEST_CASE("flat objective returns the start") {
    auto f = [](const Vector&) { return 3.0; };
    Vector x0 = Vector::LinSpaced(3, 0.0, 1.0);
    const auto r = nelder_mead(f, x0);
    CHECK(r.flat);
    CHECK(r.converged);
    CHECK(r.x == x0);
  }

  TEST_CASE("infinite regions are avoided") {
    auto f = [](const Vector& x) {
      if (x[0] < 0.0) return std::numeric_limits<double>::infinity();
      return std::pow(x[0] - 0.5, 2) + std::pow(x[1], 2);
    };
    Vector x0(2);
    x0 << 0.05, 1.0;
    const auto r = nelder_mead(f, x0);
    CHECK(r.x[0] == doctest::Approx(0.5).epsilon(1e-3));
  }

  TEST_CASE("iteration cap means not converged") {
    auto f = [](const Vector& x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); };
    NelderMeadOptions o;
    o.max_iter = 5;
    CHECK_FALSE(nelder_mead(f, Vector::Zero(2), o).converged);
  }

  TEST_CASE("deterministic") {
    auto f = [](const Vector& x) { return std::cos(x[0]) + x.squaredNorm() * 0.1; };
    const auto a = nelder_mead(f, Vector::Ones(3));
    const auto b = nelder_mead(f, Vector::Ones(3));
    CHECK(a.x == b.x);
    CHECK(a.value == b.value);
  }
}
