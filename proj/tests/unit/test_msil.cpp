#include <doctest.h>

#include "fixtures.hpp"
#include "mbt/errors.hpp"
#include "mbt/likelihood.hpp"
#include "oracles.hpp"

using namespace mbt;

TEST_SUITE("msil") {
  TEST_CASE("canonical enumeration") {
    const auto e = enumerate_classes(1, 2);
    // Death in class 1: 3 classes; alive at class 2: 9 classes.
    CHECK(e.classes.size() == 12);
    CHECK(e.reference_cardinality == doctest::Approx(39.0));
    CHECK(enumerate_classes(0, 1).reference_cardinality == doctest::Approx(6.0));
    for (const auto& c : e.classes) CHECK_NOTHROW(validate_class_vector(c));
    CHECK_THROWS_AS(enumerate_classes(20, 6), CapacityError);
  }

  TEST_CASE("class without tail symbols is a plain vector probability") {
    const auto m = fixture::example("example1");
    const MsilClassVector c{{0, -1}, 1, 2};
    const auto k = count_kernels(m, 1.0, 1);
    CHECK(msil_class_mass(m, c, k) == doctest::Approx(life_vector_probability(m, LifeVector{{0, -1}}, k)));
  }

  TEST_CASE("tail symbol matches the brute-force tail sum") {
    const auto m = fixture::example("example1");
    const auto big = oracle::literal_kernels(m, 1.0, 50);
    const MsilClassVector c{{2}, 1, 1};
    const auto k = count_kernels(m, 1.0, 1);
    const double expected = life_vector_probability(m, LifeVector{{-2}}, k) -
                            life_vector_probability(m, LifeVector{{0}}, k) -
                            life_vector_probability(m, LifeVector{{1}}, k);
    CHECK(msil_class_mass(m, c, k) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(msil_class_mass(m, c, k) == doctest::Approx(oracle::brute_force_class_mass(m, c, big)).epsilon(1e-8));
  }

  TEST_CASE("masses sum to one") {
    for (const char* name : {"example1", "example2"}) {
      const auto m = fixture::example(name);
      for (auto [K, M] : {std::pair{2, 3}, std::pair{0, 1}, std::pair{1, 4}}) {
        const auto e = enumerate_classes(K, M);
        const auto k = count_kernels(m, 1.0, K);
        double total = 0.0;
        for (const auto& c : e.classes) {
          const double f = msil_class_mass(m, c, k);
          CHECK(f >= 0.0);
          total += f;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("class of a life vector") {
    const int K = 2, M = 3;
    auto cls = [&](std::vector<int> e) { return class_of(LifeVector{std::move(e)}, K, M); };
    CHECK(cls({1, 5, 0, 7, -1})->entries == std::vector<int>{1, 3, 0});
    CHECK(cls({4, -1})->entries == std::vector<int>{3, -1});
    CHECK(cls({0, 1, 2})->entries == std::vector<int>{0, 1, 2});
    CHECK(cls({0, 1, 2, -2})->entries == std::vector<int>{0, 1, 2});
    CHECK_FALSE(cls({0, -2, 1}).has_value());
    CHECK_FALSE(cls({0, 1}).has_value());
    // Death right after class M is pooled with the survivors.
    CHECK(cls({0, 1, 2, -1})->entries == std::vector<int>{0, 1, 2});
  }

  TEST_CASE("malformed class vectors") {
    CHECK_THROWS_AS(validate_class_vector(MsilClassVector{{0, 4}, 2, 2}), StructuralError);
    CHECK_THROWS_AS(validate_class_vector(MsilClassVector{{-1}, 2, 2}), StructuralError);
    CHECK_THROWS_AS(validate_class_vector(MsilClassVector{{0, 1, 1}, 2, 2}), StructuralError);
  }
}
