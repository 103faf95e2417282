#pragma once

#include <span>
#include <vector>

namespace fml {

/// Floating-point accumulator that keeps the running total as a list of
/// non-overlapping partials (Shewchuk), so value() is the correctly rounded
/// exact sum and sign() is the exact sign of the sum.
class ExactSum {
 public:
  ExactSum() = default;
  explicit ExactSum(std::span<const double> terms);

  void add(double x);
  void add(const ExactSum& other);

  double value() const;
  int sign() const;

  const std::vector<double>& partials() const { return partials_; }

 private:
  std::vector<double> partials_;
};

/// Correctly rounded sum of `terms`, independent of their order.
double exact_sum(std::span<const double> terms);

}  // namespace fml
