#include <algorithm>
#include <cmath>

#include "mbt/errors.hpp"
#include "mbt/likelihood.hpp"

namespace mbt {

void validate_class_vector(const MsilClassVector& c) {
  if (c.K < 0 || c.M < 1) throw StructuralError("class partition needs K >= 0 and M >= 1");
  const auto& e = c.entries;
  if (e.empty()) throw StructuralError("class vector is empty");
  const bool dies = e.back() == kDeath;
  const std::size_t counts = dies ? e.size() - 1 : e.size();
  if (dies && (counts < 1 || static_cast<int>(counts) > c.M - 1))
    throw StructuralError("death class must record between 1 and M-1 classes");
  if (!dies && static_cast<int>(counts) != c.M) throw StructuralError("survival class must have length M");
  for (std::size_t i = 0; i < counts; ++i) {
    if (e[i] < 0 || e[i] > c.K + 1)
      throw StructuralError("class vector entry " + std::to_string(e[i]) + " outside {0..K+1}");
  }
}

ClassEnumeration enumerate_classes(int K, int M, std::size_t cap) {
  if (K < 0 || M < 1) throw StructuralError("class partition needs K >= 0 and M >= 1");
  const double symbols = K + 2.0;
  double total = 0.0;
  for (int j = 1; j < M; ++j) total += std::pow(symbols, j);
  total += std::pow(symbols, M);
  if (total > static_cast<double>(cap)) {
    throw CapacityError("class set of size " + std::to_string(static_cast<long double>(total)) +
                        " exceeds the enumeration cap");
  }

  ClassEnumeration out;
  out.reference_cardinality = symbols * (std::pow(symbols, M + 1) - 1.0) / (K + 1.0);
  out.classes.reserve(static_cast<std::size_t>(total));
  auto emit_all = [&](int length, bool dies) {
    std::vector<int> digits(length, 0);
    while (true) {
      MsilClassVector c{digits, K, M};
      if (dies) c.entries.push_back(kDeath);
      out.classes.push_back(std::move(c));
      int pos = length - 1;
      while (pos >= 0 && digits[pos] == K + 1) digits[pos--] = 0;
      if (pos < 0) break;
      ++digits[pos];
    }
  };
  for (int j = 1; j < M; ++j) emit_all(j, true);
  emit_all(M, false);
  return out;
}

double msil_class_mass(const TmapModel& model, const MsilClassVector& c, const CountKernels& kernels) {
  validate_class_vector(c);
  if (kernels.K < c.K) throw StructuralError("kernels do not cover the class partition K");
  std::vector<std::size_t> tails;
  for (std::size_t i = 0; i < c.entries.size(); ++i)
    if (c.entries[i] == c.tail_symbol()) tails.push_back(i);
  LifeVector v{c.entries};
  if (tails.empty()) return life_vector_probability(model, v, kernels);

  // Each tail position runs over {-2, 0, ..., K}: "any count" minus the
  // counts that the class excludes.
  const int choices = c.K + 2;
  std::vector<int> pick(tails.size(), 0);
  double total = 0.0;
  while (true) {
    int censored = 0;
    for (std::size_t j = 0; j < tails.size(); ++j) {
      const int value = pick[j] == 0 ? kCensored : pick[j] - 1;
      censored += value == kCensored;
      v.entries[tails[j]] = value;
    }
    const bool negative = (tails.size() + censored) % 2 == 1;
    const double p = life_vector_probability(model, v, kernels);
    total += negative ? -p : p;
    std::size_t pos = 0;
    while (pos < pick.size() && pick[pos] == choices - 1) pick[pos++] = 0;
    if (pos == pick.size()) break;
    ++pick[pos];
  }
  return std::max(total, 0.0);
}

double msil_class_mass(const TmapModel& model, const MsilClassVector& c, double class_length) {
  return msil_class_mass(model, c, count_kernels(model, class_length, c.K));
}

std::optional<MsilClassVector> class_of(const LifeVector& v, int K, int M) {
  validate_life_vector(v);
  const auto& e = v.entries;
  MsilClassVector c{{}, K, M};
  for (std::size_t i = 0; i <= e.size(); ++i) {
    if (static_cast<int>(i) == M) return c;
    if (i == e.size()) return std::nullopt;
    if (e[i] == kDeath) {
      c.entries.push_back(kDeath);
      return c;
    }
    if (e[i] == kCensored) return std::nullopt;
    c.entries.push_back(std::min(e[i], K + 1));
  }
  return std::nullopt;
}

}  // namespace mbt
