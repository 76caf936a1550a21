#pragma once

#include <random>

#include "mbt/model.hpp"
#include "mbt/simulation.hpp"

namespace fixture {

inline mbt::TmapModel single_phase(double lambda = 2.0, double mu = 0.5) {
  return mbt::build_atmmpp({mbt::Vector(0), mbt::Vector::Constant(1, mu), mbt::Vector::Constant(1, lambda)});
}

inline mbt::TmapModel example(const char* name) { return mbt::build_atmmpp(mbt::preset(name).params); }

inline mbt::AtmmppParams random_params(int n, std::mt19937_64& rng, double lo = 0.01, double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  mbt::AtmmppParams p;
  p.gamma.resize(n - 1);
  p.mu.resize(n);
  p.lambda.resize(n);
  for (int i = 0; i < n - 1; ++i) p.gamma[i] = u(rng);
  for (int i = 0; i < n; ++i) p.mu[i] = u(rng), p.lambda[i] = u(rng);
  return p;
}

}  // namespace fixture
