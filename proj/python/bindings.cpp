#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mbt/demography.hpp"
#include "mbt/errors.hpp"
#include "mbt/estimation.hpp"
#include "mbt/io.hpp"
#include "mbt/likelihood.hpp"
#include "mbt/selection.hpp"
#include "mbt/simulation.hpp"

namespace py = pybind11;
using namespace mbt;

namespace {

LifeVectorSample to_sample(const std::vector<std::vector<int>>& vectors, double l) {
  LifeVectorSample s;
  s.class_length = l;
  for (const auto& v : vectors) s.vectors.push_back(LifeVector{v});
  validate_sample(s);
  return s;
}

std::vector<std::vector<int>> from_sample(const LifeVectorSample& s) {
  std::vector<std::vector<int>> out;
  for (const auto& v : s.vectors) out.push_back(v.entries);
  return out;
}

GlobalRates to_rates(const std::vector<double>& fertility, const std::vector<double>& mortality, double l) {
  if (fertility.size() != mortality.size()) throw StructuralError("fertility and mortality lengths differ");
  GlobalRates r;
  r.class_length = l;
  for (std::size_t i = 0; i < fertility.size(); ++i) {
    RateRow row;
    row.age = static_cast<double>(i) * l;
    if (!std::isnan(fertility[i])) row.fertility = fertility[i];
    if (!std::isnan(mortality[i])) row.mortality = mortality[i];
    r.rows.push_back(row);
  }
  r.validate();
  return r;
}

FitConfig make_config(int n, int seeds, std::uint64_t seed, int jobs) {
  FitConfig c;
  c.n = n;
  c.seeds = seeds;
  c.rng_seed = seed;
  c.jobs = jobs;
  return c;
}

py::dict fit_dict(const FitResult& f) {
  py::dict d;
  d["model"] = f.model();
  d["objective"] = f.objective;
  d["winner"] = f.winner;
  d["flat"] = f.flat;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Markovian binary tree population models";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<StructuralError>(m, "StructuralError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<OptimizationError>(m, "OptimizationError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<TmapModel>(m, "Model")
      .def_readonly("n", &TmapModel::n)
      .def_readonly("alpha", &TmapModel::alpha)
      .def_readonly("D0", &TmapModel::D0)
      .def_readonly("D1", &TmapModel::D1)
      .def_readonly("d", &TmapModel::d)
      .def("to_json", [](const TmapModel& mod) { return io::model_to_json(mod); })
      .def_static("from_json", &io::model_from_json)
      .def("__repr__", [](const TmapModel& mod) { return "<Model n=" + std::to_string(mod.n) + ">"; });

  m.def(
      "atmmpp",
      [](const Vector& gamma, const Vector& mu, const Vector& lambda) {
        return build_atmmpp(AtmmppParams{gamma, mu, lambda});
      },
      py::arg("gamma"), py::arg("mu"), py::arg("lambda_"));
  m.def(
      "preset", [](const std::string& name) { return build_atmmpp(preset(name).params); }, py::arg("name"));

  m.def(
      "curves",
      [](const TmapModel& mod, const std::vector<double>& ages, double l) {
        const auto c = CurveEvaluator(mod, l).evaluate(ages);
        py::dict d;
        d["age"] = c.ages;
        d["mortality"] = c.mortality;
        d["fertility"] = c.fertility;
        d["survival"] = c.survival;
        return d;
      },
      py::arg("model"), py::arg("ages"), py::arg("l") = 1.0);
  m.def("extinction_vector", [](const TmapModel& mod) { return extinction_vector(mod); }, py::arg("model"));
  m.def(
      "extinction_at_age",
      [](const TmapModel& mod, double x) { return extinction_by_initial_age(mod, x); }, py::arg("model"),
      py::arg("age"));
  m.def("mean_offspring", &mean_offspring, py::arg("model"));

  m.def(
      "simulate",
      [](const TmapModel& mod, std::size_t N, double T, double l, std::uint64_t seed) {
        return from_sample(simulate_sample(mod, SimConfig{N, T, l, seed, 0.0}));
      },
      py::arg("model"), py::arg("N"), py::arg("T"), py::arg("l") = 1.0, py::arg("seed") = 1);

  m.def(
      "log_likelihood",
      [](const TmapModel& mod, const std::vector<std::vector<int>>& vectors, double l) {
        const auto ll = log_likelihood(mod, to_sample(vectors, l));
        return ll.is_log_zero() ? -std::numeric_limits<double>::infinity() : ll.value;
      },
      py::arg("model"), py::arg("vectors"), py::arg("l") = 1.0);

  m.def(
      "fit_individual",
      [](const std::vector<std::vector<int>>& vectors, int n, double l, int seeds, std::uint64_t seed, int jobs) {
        const auto s = to_sample(vectors, l);
        py::gil_scoped_release release;
        auto f = fit_individual(s, make_config(n, seeds, seed, jobs));
        py::gil_scoped_acquire acquire;
        return fit_dict(f);
      },
      py::arg("vectors"), py::arg("n"), py::arg("l") = 1.0, py::arg("seeds") = 25, py::arg("seed") = 1,
      py::arg("jobs") = 1);

  m.def(
      "fit_global",
      [](const std::vector<double>& fertility, const std::vector<double>& mortality, int n, double l, int seeds,
         std::uint64_t seed, int jobs) {
        const auto r = to_rates(fertility, mortality, l);
        py::gil_scoped_release release;
        auto f = fit_global(r, make_config(n, seeds, seed, jobs));
        py::gil_scoped_acquire acquire;
        return fit_dict(f);
      },
      py::arg("fertility"), py::arg("mortality"), py::arg("n"), py::arg("l") = 1.0, py::arg("seeds") = 25,
      py::arg("seed") = 1, py::arg("jobs") = 1);

  m.def(
      "aic",
      [](const std::vector<std::vector<int>>& vectors, const std::vector<int>& n_range, double l, int seeds,
         std::uint64_t seed) {
        const auto r = aic(to_sample(vectors, l), n_range, make_config(1, seeds, seed, 1));
        return std::make_pair(r.chosen_n, r.scores);
      },
      py::arg("vectors"), py::arg("n_range"), py::arg("l") = 1.0, py::arg("seeds") = 25, py::arg("seed") = 1);
}
