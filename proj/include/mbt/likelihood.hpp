#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "mbt/model.hpp"

namespace mbt {

inline constexpr int kDeath = -1;
inline constexpr int kCensored = -2;

/// Sentinel for log 0: the most negative finite double.
inline constexpr double kLogZero = std::numeric_limits<double>::lowest();

/// Per-class birth counts of one individual. Entry i is the number of
/// children born in class i, -2 when the class is unobserved, and a final -1
/// when the individual died during the preceding class.
struct LifeVector {
  std::vector<int> entries;

  friend bool operator==(const LifeVector&, const LifeVector&) = default;
  friend auto operator<=>(const LifeVector&, const LifeVector&) = default;
};

struct LifeVectorSample {
  std::vector<LifeVector> vectors;
  double class_length = 1.0;

  std::size_t size() const { return vectors.size(); }
};

void validate_life_vector(const LifeVector& v);
void validate_sample(const LifeVectorSample& sample);

/// Largest birth count in the sample (0 when there is none).
int max_count(const LifeVectorSample& sample);

/// One-class transition kernels: P(k)_ij = P[k births, in phase j at l | phase i],
/// p(k)_i = P[k births, dead by l | phase i], and their sums over all k.
struct CountKernels {
  int K = 0;
  double class_length = 1.0;
  std::vector<Matrix> P_k;  // k = 0..K
  std::vector<Vector> p_k;  // k = 0..K
  Matrix P;
  Vector p;
};

struct KernelOptions {
  int capacity = 5000;  // cap on n (K + 1)
};

CountKernels count_kernels(const TmapModel& model, double l, int K, const KernelOptions& opts = {});

/// Probability of observing v. Kernels must cover the largest count in v.
double life_vector_probability(const TmapModel& model, const LifeVector& v, const CountKernels& kernels);

/// log of life_vector_probability, accumulated with per-step rescaling so long
/// vectors do not underflow. Returns kLogZero for probability 0.
double log_life_vector_probability(const TmapModel& model, const LifeVector& v, const CountKernels& kernels);

struct LogLikelihood {
  double value = 0.0;                          // kLogZero if any vector has probability 0
  std::vector<std::size_t> zero_probability;  // indices into the sample
  bool is_log_zero() const { return !zero_probability.empty(); }
};

/// Sample log-likelihood; kernels are built once at K = max count.
LogLikelihood log_likelihood(const TmapModel& model, const LifeVectorSample& sample);

/// Same, with prebuilt kernels (K must cover the sample).
LogLikelihood log_likelihood(const TmapModel& model, const LifeVectorSample& sample, const CountKernels& kernels);

/// Per-vector log probabilities in sample order (kLogZero for zeros).
std::vector<double> log_probabilities(const TmapModel& model, const LifeVectorSample& sample,
                                      const CountKernels& kernels);

// ---------------------------------------------------------------------------
// Finite partition of life-vector space used by the MSIL criterion.

/// A class template over {-1, 0..K, K+1}; K+1 stands for "at least K+1".
/// Canonical classes are either [c_1..c_j, -1] with 1 <= j <= M-1 (death in
/// class j) or [c_1..c_M] (alive at the start of class M; everything later pooled).
struct MsilClassVector {
  std::vector<int> entries;
  int K = 0;
  int M = 1;

  int tail_symbol() const { return K + 1; }
  friend bool operator==(const MsilClassVector&, const MsilClassVector&) = default;
  friend auto operator<=>(const MsilClassVector&, const MsilClassVector&) = default;
};

void validate_class_vector(const MsilClassVector& c);

struct ClassEnumeration {
  std::vector<MsilClassVector> classes;
  /// (K+2)((K+2)^{M+1} - 1)/(K+1), reported for cross-checking only.
  double reference_cardinality = 0.0;
};

ClassEnumeration enumerate_classes(int K, int M, std::size_t cap = 1'000'000);

/// Model mass of a class. Tail symbols are resolved by inclusion-exclusion
/// over substitutions in {-2, 0..K}. Kernels must be built with K >= c.K.
double msil_class_mass(const TmapModel& model, const MsilClassVector& c, const CountKernels& kernels);
double msil_class_mass(const TmapModel& model, const MsilClassVector& c, double class_length = 1.0);

/// Class of a fully observed life vector: counts above K collapse to K+1 and
/// the vector is truncated at M classes. Returns nullopt when the vector does
/// not determine a single class (ends early without death, or has a -2
/// inside the first M classes).
std::optional<MsilClassVector> class_of(const LifeVector& v, int K, int M);

}  // namespace mbt
