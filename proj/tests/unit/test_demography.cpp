#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mbt/demography.hpp"
#include "mbt/errors.hpp"

using namespace mbt;

TEST_SUITE("demography") {
  TEST_CASE("single phase closed forms") {
    const auto m = fixture::single_phase(2.0, 0.5);
    CHECK(survival(m, 0.0) == 1.0);
    CHECK(survival(m, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    for (double x : {0.0, 1.0, 7.5}) {
      CHECK(mortality_rate(m, x, 1.0) == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-13));
      CHECK(fertility_rate(m, x, 1.0) == doctest::Approx(2.0 * (1.0 - std::exp(-0.5)) / 0.5).epsilon(1e-13));
    }
    CHECK(mortality_rate(m, 0.0, 1.0) == doctest::Approx(0.393469).epsilon(1e-6));
    CHECK(fertility_rate(m, 0.0, 1.0) == doctest::Approx(1.573877).epsilon(1e-6));
  }

  TEST_CASE("no deaths and no births") {
    const auto immortal = build_atmmpp({Vector::Constant(1, 0.1), Vector::Zero(2), Vector::Ones(2)});
    CHECK(validate(immortal).empty());
    CHECK(mortality_rate(immortal, 2.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fertility_rate(immortal, 4.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(mean_offspring(immortal), NumericError);
    const auto barren = build_atmmpp({Vector::Constant(1, 0.3), Vector::Constant(2, 0.2), Vector::Zero(2)});
    CHECK(fertility_rate(barren, 3.0, 1.0) == 0.0);
    const auto idle = build_atmmpp({Vector(0), Vector::Zero(1), Vector::Zero(1)});
    CHECK_THROWS_AS(fertility_rate(idle, 0.0, 1.0), StructuralError);
  }

  TEST_CASE("curve identities on the examples") {
    for (const char* name : {"example1", "example2", "example3"}) {
      const auto m = fixture::example(name);
      for (double x : {0.0, 1.0, 2.5, 6.0}) {
        for (double l : {0.25, 1.0, 2.0, 5.0}) {
          const double lhs = mortality_rate(m, x, l);
          CHECK(lhs == doctest::Approx(1.0 - survival(m, x + l) / survival(m, x)).epsilon(1e-10));
        }
        for (int l : {2, 3, 5}) {
          double sum = 0.0;
          for (int j = 0; j < l; ++j) sum += fertility_rate(m, x + j, 1.0) * survival(m, x + j) / survival(m, x);
          CHECK(fertility_rate(m, x, l) == doctest::Approx(sum).epsilon(1e-8));
        }
      }
    }
  }

  TEST_CASE("curve evaluator agrees with pointwise formulas") {
    const auto m = fixture::example("example2");
    const auto grid = AgeGrid::uniform(20.0, 1.0);
    const auto c = curves(m, grid);
    REQUIRE(c.ages.size() == 21);
    for (std::size_t i = 0; i < c.ages.size(); ++i) {
      CHECK(c.survival[i] == doctest::Approx(survival(m, c.ages[i])).epsilon(1e-12));
      CHECK(c.mortality[i] == doctest::Approx(mortality_rate(m, c.ages[i], 1.0)).epsilon(1e-12));
      CHECK(c.fertility[i] == doctest::Approx(fertility_rate(m, c.ages[i], 1.0)).epsilon(1e-12));
      if (i) CHECK(c.survival[i] <= c.survival[i - 1]);
      CHECK(c.mortality[i] >= 0.0);
      CHECK(c.mortality[i] <= 1.0);
    }
    const auto irregular = CurveEvaluator(m, 1.0).evaluate({0.0, 0.3, 2.9, 11.0});
    CHECK(irregular.survival[2] == doctest::Approx(survival(m, 2.9)).epsilon(1e-12));
  }

  TEST_CASE("survival underflow names the age") {
    const auto m = fixture::single_phase(1.0, 50.0);
    try {
      CurveEvaluator(m, 1.0).evaluate({0.0, 1.0, 20.0});
      FAIL("expected underflow");
    } catch (const UnderflowError& e) {
      CHECK(std::string(e.what()).find("20") != std::string::npos);
    }
  }

  TEST_CASE("rate equivalents") {
    const auto same = rates_model_equivalents(1.3, 0.2, 1.0);
    CHECK(same.mortality == doctest::Approx(0.2));
    CHECK(same.fertility == doctest::Approx(1.3));
    const auto two = rates_model_equivalents(1.0, 0.5, 2.0);
    CHECK(two.mortality == doctest::Approx(0.75));
    CHECK(two.fertility == doctest::Approx(1.5));
    const auto limit = rates_model_equivalents(1.0, 0.0, 5.0);
    CHECK(limit.mortality == 0.0);
    CHECK(limit.fertility == doctest::Approx(5.0));
    CHECK_THROWS_AS(rates_model_equivalents(1.0, 0.5, 2.5), StructuralError);
    CHECK_THROWS_AS(rates_model_equivalents(1.0, 1.5, 2.0), StructuralError);
  }

  TEST_CASE("extinction probabilities") {
    const auto m = fixture::single_phase(2.0, 0.5);
    const Vector q = extinction_vector(m);
    CHECK(q(0) == doctest::Approx(0.25).epsilon(1e-10));
    for (double x : {0.0, 1.0, 4.0}) CHECK(extinction_by_initial_age(m, x) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(mean_offspring(m) == doctest::Approx(4.0));

    const auto barren = build_atmmpp({Vector::Constant(1, 0.3), Vector::Constant(2, 0.2), Vector::Zero(2)});
    CHECK(extinction_vector(barren).isOnes(1e-12));

    // Subcritical: mean offspring below one forces certain extinction.
    const auto sub = build_atmmpp({Vector::Constant(1, 0.5), Vector::Constant(2, 1.0), Vector::Constant(2, 0.4)});
    REQUIRE(mean_offspring(sub) < 1.0);
    CHECK(extinction_vector(sub, 1e-12).isOnes(1e-5));
  }

  TEST_CASE("extinction fixed point residual and age profile") {
    const auto m = fixture::example("example1");
    const double tol = 1e-12;
    const Vector q = extinction_vector(m, tol);
    const Vector diag = -m.D0.diagonal();
    Matrix off = m.D0;
    off.diagonal().setZero();
    const double aq = m.alpha.dot(q);
    const Vector rhs = (m.d + off * q + aq * (m.D1 * q)).cwiseQuotient(diag);
    CHECK((rhs - q).cwiseAbs().maxCoeff() < 10 * tol);
    CHECK(extinction_by_initial_age(m, 0.0) == doctest::Approx(aq).epsilon(1e-12));
    for (double x : {0.5, 2.0, 8.0}) {
      const double h = 1e-4;
      const double a = extinction_by_initial_age(m, x, q), b = extinction_by_initial_age(m, x + h, q);
      CHECK(a >= 0.0);
      CHECK(a <= 1.0);
      CHECK(std::abs(a - b) < 1e-3);
    }
  }

  TEST_CASE("critical family and agreement of the solvers") {
    const auto critical = fixture::single_phase(1.0, 1.0);
    CHECK(extinction_vector(critical)(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(extinction_vector(critical, 1e-12, 100'000, ExtinctionMethod::functional), IterationError);
    for (const char* name : {"example1", "example2", "example3"}) {
      const auto m = fixture::example(name);
      const Vector a = extinction_vector(m);
      const Vector b = extinction_vector(m, 1e-14, 10'000'000, ExtinctionMethod::functional);
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("extinction iteration cap") {
    const auto m = fixture::example("example1");
    CHECK_THROWS_AS(extinction_vector(m, 1e-15, 3), IterationError);
  }
}
