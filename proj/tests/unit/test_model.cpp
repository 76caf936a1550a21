#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "mbt/errors.hpp"
#include "mbt/matrix_exp.hpp"
#include "mbt/model.hpp"
#include "oracles.hpp"

using namespace mbt;

TEST_SUITE("model") {
  TEST_CASE("single phase model follows from conservation") {
    const auto m = fixture::single_phase(2.0, 0.5);
    CHECK(m.n == 1);
    CHECK(m.alpha(0) == 1.0);
    CHECK(m.D0(0, 0) == doctest::Approx(-2.5));
    CHECK(m.D1(0, 0) == 2.0);
    CHECK(m.d(0) == 0.5);
    CHECK(validate(m).empty());
  }

  TEST_CASE("example 1 layout") {
    const auto m = fixture::example("example1");
    CHECK(m.n == 3);
    CHECK(m.D0(0, 1) == 0.25);
    CHECK(m.D0(1, 2) == 0.25);
    CHECK(m.D0(0, 0) == doctest::Approx(-6.45));
    CHECK(m.D0(2, 2) == doctest::Approx(-2.9));
    CHECK(m.D1(1, 1) == 3.0);
    CHECK(m.d(2) == 0.9);
    CHECK(validate(m).empty());
  }

  TEST_CASE("immortal two phase model is valid") {
    const auto m = build_atmmpp({Vector::Constant(1, 0.1), Vector::Zero(2), Vector::Ones(2)});
    CHECK(validate(m).empty());
    CHECK(m.d.isZero());
  }

  TEST_CASE("dimension and sign errors") {
    CHECK_THROWS_AS(build_atmmpp({Vector::Ones(2), Vector::Ones(2), Vector::Ones(2)}), StructuralError);
    CHECK_THROWS_AS(build_atmmpp({Vector(0), Vector::Constant(1, -0.1), Vector::Ones(1)}), StructuralError);
    CHECK_THROWS_AS(build_atmmpp({Vector::Zero(1), Vector::Ones(2), Vector::Ones(2)}), StructuralError);
  }

  TEST_CASE("conservation violation reports its residual") {
    auto m = fixture::example("example1");
    m.d(0) += 0.1;
    const auto diags = validate(m);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].invariant == "row_conservation");
    CHECK(diags[0].row == 0);
    CHECK(diags[0].residual == doctest::Approx(0.1));
    CHECK_THROWS_AS(require_valid(m), StructuralError);
  }

  TEST_CASE("negative birth rate is reported") {
    auto m = fixture::example("example1");
    m.D1(1, 1) = -1.0;
    m.D0(1, 1) = -m.d(1) - m.D0(1, 2) + 1.0;
    bool found = false;
    for (const auto& d : validate(m)) found = found || d.invariant == "D1_nonnegative";
    CHECK(found);
  }

  TEST_CASE("theta round trip and parameter count") {
    std::mt19937_64 rng(3);
    const auto p = fixture::random_params(4, rng);
    const Vector th = p.theta();
    CHECK(th.size() == AtmmppParams::parameter_count(4));
    CHECK(AtmmppParams::parameter_count(8) == 23);
    const auto q = AtmmppParams::from_theta(4, th);
    CHECK(q.gamma == p.gamma);
    CHECK(q.mu == p.mu);
    CHECK(q.lambda == p.lambda);
  }

  TEST_CASE("random draws always validate and give a sub-stochastic semigroup") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pick(1, 6);
    std::uniform_real_distribution<double> time(0.0, 5.0);
    for (int r = 0; r < 1000; ++r) {
      const auto m = build_atmmpp(fixture::random_params(pick(rng), rng));
      REQUIRE(validate(m).empty());
      if (r % 20 == 0) {
        const double s = time(rng), t = time(rng);
        const Matrix D = m.generator();
        const Matrix est = matrix_exp(D, s + t);
        CHECK((est.array() >= -1e-15).all());
        CHECK(est.rowwise().sum().maxCoeff() <= 1.0 + 1e-10);
        CHECK((est - matrix_exp(D, s) * matrix_exp(D, t)).cwiseAbs().maxCoeff() < 1e-8);
      }
    }
  }
}
