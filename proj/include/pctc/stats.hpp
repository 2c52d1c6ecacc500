#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pctc {

/// Sample mean with a two-sided Student-t confidence half-width.
struct Aggregate {
  double mean = 0.0;
  /// Absent when there are fewer than two rows.
  std::optional<double> half_width;
  std::size_t n = 0;

  [[nodiscard]] double lower() const { return mean - half_width.value_or(0.0); }
  [[nodiscard]] double upper() const { return mean + half_width.value_or(0.0); }
};

/// Throws Error on empty input or confidence outside (0, 1).
Aggregate aggregate(std::span<const double> rows, double confidence = 0.95);

/// Two-sided Student-t quantile t_{(1+confidence)/2, dof}.
double student_t_critical(double confidence, std::size_t dof);

double pearson(std::span<const double> x, std::span<const double> y);
double median(std::vector<double> values);

}  // namespace pctc
