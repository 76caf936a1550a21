#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mbt/demography.hpp"
#include "mbt/errors.hpp"
#include "mbt/estimation.hpp"
#include "mbt/uncertainty.hpp"

using namespace mbt;

namespace {

const std::vector<double> kAges{0, 1, 2, 3, 4};

OutputFn mortality_curve() {
  return [](const TmapModel& m) { return CurveEvaluator(m, 1.0).evaluate(kAges).mortality; };
}

}  // namespace

TEST_SUITE("uncertainty") {
  TEST_CASE("normal quantile") {
    CHECK(normal_quantile(0.95) == doctest::Approx(1.959964).epsilon(1e-6));
    CHECK(normal_quantile(0.9) == doctest::Approx(1.644854).epsilon(1e-6));
    CHECK_THROWS_AS(normal_quantile(1.0), StructuralError);
  }

  TEST_CASE("identical replicates give a zero width band") {
    const std::vector<std::vector<double>> curves(4, std::vector<double>{0.1, 0.2});
    const auto b = band_from_replicates(curves, {0, 1}, 0.95, BandKind::mean_sd);
    CHECK(b.mean_width() == 0.0);
    CHECK(b.estimate[1] == 0.2);
    const auto q = band_from_replicates(curves, {0, 1}, 0.95, BandKind::quantile);
    CHECK(q.mean_width() == 0.0);
  }

  TEST_CASE("band ordering") {
    const std::vector<std::vector<double>> curves{{0.1, 1.0}, {0.3, 2.0}, {0.2, 0.5}, {0.25, 4.0}};
    for (auto kind : {BandKind::mean_sd, BandKind::quantile}) {
      const auto b = band_from_replicates(curves, {0, 1}, 0.95, kind);
      for (std::size_t i = 0; i < 2; ++i) {
        CHECK(b.lower[i] <= b.estimate[i]);
        CHECK(b.estimate[i] <= b.upper[i]);
      }
    }
  }

  TEST_CASE("bootstrap of identical vectors") {
    LifeVectorSample s;
    for (int i = 0; i < 20; ++i) s.vectors.push_back(LifeVector{{1, 2, 0, -1}});
    FitConfig fc;
    fc.n = 1;
    fc.seeds = 1;
    BandConfig bc;
    bc.B = 3;
    const auto b = band_bootstrap(
        s, [&](const LifeVectorSample& x) { return fit_individual(x, fc).model(); }, mortality_curve(), kAges, bc);
    CHECK(b.mean_width() < 1e-12);
    CHECK(b.failures == 0);
    CHECK(b.method == BandMethod::bootstrap);
  }

  TEST_CASE("constant output gives a zero width delta band") {
    const auto truth = fixture::single_phase(2.0, 0.5);
    const auto s = simulate_sample(truth, SimConfig{300, 8.0, 1.0, 3, 0.0});
    FitConfig fc;
    fc.n = 1;
    fc.seeds = 2;
    const auto fit = fit_individual(s, fc);
    const auto b = band_delta(s, fit.params, [](const TmapModel&) { return std::vector<double>(5, 0.5); }, kAges);
    CHECK(b.mean_width() == 0.0);
    CHECK(b.covariance.has_value());
    const auto m = band_delta(s, fit.params, mortality_curve(), kAges);
    CHECK(m.mean_width() > 0.0);
    CHECK_FALSE(m.boundary);
    for (std::size_t i = 0; i < kAges.size(); ++i) CHECK(m.lower[i] <= m.upper[i]);
  }

  TEST_CASE("resampling is reproducible") {
    const auto truth = fixture::single_phase(2.0, 0.5);
    FitConfig fc;
    fc.n = 1;
    fc.seeds = 1;
    BandConfig bc;
    bc.B = 3;
    auto fit = [&](const LifeVectorSample& x) { return fit_individual(x, fc).model(); };
    const auto a = band_resample(truth, SimConfig{100, 5.0, 1.0, 0, 0.0}, fit, mortality_curve(), kAges, bc);
    const auto b = band_resample(truth, SimConfig{100, 5.0, 1.0, 0, 0.0}, fit, mortality_curve(), kAges, bc);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    bc.B = 1;
    CHECK_THROWS_AS(band_resample(truth, SimConfig{}, fit, mortality_curve(), kAges, bc), StructuralError);
  }
}
