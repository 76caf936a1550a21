#include "mbt/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mbt/detail/block_toeplitz.hpp"
#include "mbt/detail/pade.hpp"
#include "mbt/errors.hpp"
#include "mbt/matrix_exp.hpp"

namespace mbt {

void validate_life_vector(const LifeVector& v) {
  const auto& e = v.entries;
  if (e.empty()) throw StructuralError("life vector is empty");
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] < kCensored) throw StructuralError("life vector entry " + std::to_string(e[i]) + " is not allowed");
    if (e[i] == kDeath && i + 1 != e.size())
      throw StructuralError("-1 must be the final entry of a life vector");
  }
  if (e.size() == 1 && e[0] == kDeath) throw StructuralError("life vector [-1] has no class before death");
}

void validate_sample(const LifeVectorSample& sample) {
  if (sample.vectors.empty()) throw StructuralError("life-vector sample is empty");
  if (!(sample.class_length > 0.0)) throw StructuralError("class length must be positive");
  for (std::size_t j = 0; j < sample.vectors.size(); ++j) {
    try {
      validate_life_vector(sample.vectors[j]);
    } catch (const StructuralError& err) {
      throw StructuralError("vector " + std::to_string(j) + ": " + err.what());
    }
  }
}

int max_count(const LifeVectorSample& sample) {
  int k = 0;
  for (const auto& v : sample.vectors)
    for (int e : v.entries) k = std::max(k, e);
  return k;
}

CountKernels count_kernels(const TmapModel& model, double l, int K, const KernelOptions& opts) {
  require_valid(model);
  if (!(l > 0.0) || !std::isfinite(l)) throw StructuralError("class length must be positive");
  if (K < 0) throw StructuralError("maximum count K must be nonnegative");
  const int n = model.n;
  if (static_cast<long>(n) * (K + 1) > opts.capacity) {
    std::ostringstream os;
    os << "count kernel generator of order " << static_cast<long>(n) * (K + 1) << " exceeds capacity "
       << opts.capacity;
    throw CapacityError(os.str());
  }

  // Counting generator with levels k = 0..K. The factorial scaling of the
  // subdiagonal (k D1, extracted with 1/k!) is a similarity transform of this
  // one, which carries D1 on every subdiagonal block and yields P(k) directly.
  // Each level gets an extra absorbing phase fed by d, so the same exponential
  // also holds p(k) without the cancellation of (I - e^{Ml})(-M)^{-1}.
  const int m = n + 1;
  detail::LowerBlockToeplitz generator(m, K + 1);
  generator[0] = Matrix::Zero(m, m);
  generator[0].topLeftCorner(n, n) = model.D0 * l;
  generator[0].topRightCorner(n, 1) = model.d * l;
  if (K >= 1) {
    generator[1] = Matrix::Zero(m, m);
    generator[1].topLeftCorner(n, n) = model.D1 * l;
  }
  const detail::LowerBlockToeplitz expo = detail::expm_scaling_squaring(generator);

  CountKernels out;
  out.K = K;
  out.class_length = l;
  out.P_k.reserve(K + 1);
  out.p_k.reserve(K + 1);
  for (int k = 0; k <= K; ++k) {
    if (!expo[k].allFinite()) throw NumericError("count kernel exponential is not finite");
    out.P_k.push_back(expo[k].topLeftCorner(n, n).cwiseMax(0.0));
    out.p_k.push_back(expo[k].topRightCorner(n, 1).cwiseMax(0.0));
  }

  // [D d; 0 0] exponentiates to [e^{Dl}, int_0^l e^{Du} d du]; no inverse of D
  // is needed, so immortal phases are fine.
  Matrix aug = Matrix::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = model.generator();
  aug.topRightCorner(n, 1) = model.d;
  const Matrix e = matrix_exp(aug, l);
  out.P = e.topLeftCorner(n, n).cwiseMax(0.0);
  out.p = e.topRightCorner(n, 1).cwiseMax(0.0);
  return out;
}

namespace {

void check_kernel_cover(const LifeVector& v, const CountKernels& kernels) {
  for (int e : v.entries) {
    if (e > kernels.K) {
      throw StructuralError("life vector count " + std::to_string(e) + " exceeds kernel K=" +
                            std::to_string(kernels.K));
    }
  }
}

// Walks the vector left to right. Non-terminal factors multiply the phase row
// vector; the terminal factor reduces it to a scalar.
template <class Rescale>
double walk(const TmapModel& model, const LifeVector& v, const CountKernels& kernels, Rescale&& rescale) {
  const auto& e = v.entries;
  const std::size_t len = e.size();
  RowVector row = model.alpha;
  for (std::size_t i = 0; i < len; ++i) {
    const int entry = e[i];
    const bool dies_next = i + 1 < len && e[i + 1] == kDeath;
    if (dies_next) {
      const Vector& last = entry >= 0 ? kernels.p_k[entry] : kernels.p;
      return row.dot(last);
    }
    if (i + 1 == len) {
      if (entry == kCensored) return row.sum();
      return row.dot(kernels.P_k[entry].rowwise().sum() + kernels.p_k[entry]);
    }
    row = row * (entry >= 0 ? kernels.P_k[entry] : kernels.P);
    if (!rescale(row)) return 0.0;
  }
  return row.sum();
}

}  // namespace

double life_vector_probability(const TmapModel& model, const LifeVector& v, const CountKernels& kernels) {
  validate_life_vector(v);
  check_kernel_cover(v, kernels);
  if (model.n != kernels.P.rows()) throw StructuralError("kernels were built for a different phase count");
  const double p = walk(model, v, kernels, [](RowVector&) { return true; });
  return std::clamp(p, 0.0, 1.0);
}

double log_life_vector_probability(const TmapModel& model, const LifeVector& v, const CountKernels& kernels) {
  validate_life_vector(v);
  check_kernel_cover(v, kernels);
  double log_scale = 0.0;
  const double p = walk(model, v, kernels, [&](RowVector& row) {
    const double c = row.maxCoeff();
    if (!(c > 0.0)) return false;
    log_scale += std::log(c);
    row /= c;
    return true;
  });
  if (!(p > 0.0)) return kLogZero;
  return log_scale + std::log(p);
}

std::vector<double> log_probabilities(const TmapModel& model, const LifeVectorSample& sample,
                                      const CountKernels& kernels) {
  std::vector<double> out;
  out.reserve(sample.size());
  for (const auto& v : sample.vectors) out.push_back(log_life_vector_probability(model, v, kernels));
  return out;
}

LogLikelihood log_likelihood(const TmapModel& model, const LifeVectorSample& sample, const CountKernels& kernels) {
  validate_sample(sample);
  LogLikelihood out;
  const auto logs = log_probabilities(model, sample, kernels);
  for (std::size_t j = 0; j < logs.size(); ++j) {
    if (logs[j] == kLogZero)
      out.zero_probability.push_back(j);
    else
      out.value += logs[j];
  }
  if (out.is_log_zero()) out.value = kLogZero;
  return out;
}

LogLikelihood log_likelihood(const TmapModel& model, const LifeVectorSample& sample) {
  validate_sample(sample);
  return log_likelihood(model, sample, count_kernels(model, sample.class_length, max_count(sample)));
}

}  // namespace mbt
