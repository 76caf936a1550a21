#pragma once

#include <optional>
#include <vector>

namespace mbt {

/// One age class of population-average data. Rates are per year: fertility is
/// the expected number of births per year, mortality the probability of dying
/// within a year, for an individual in the class [age, age + l).
struct RateRow {
  double age = 0.0;
  std::optional<double> fertility;
  std::optional<double> mortality;
  std::optional<double> count;         // raw observations behind the rates
  std::optional<double> fertility_se;  // standard error of the fertility rate
};

struct GlobalRates {
  double class_length = 1.0;
  std::vector<RateRow> rows;  // ages 0, l, 2l, ...

  /// Throws StructuralError on out-of-range rates, irregular ages, or no data.
  void validate() const;
  /// Index of the last class, M.
  int max_age_index() const { return static_cast<int>(rows.size()) - 1; }
};

}  // namespace mbt
