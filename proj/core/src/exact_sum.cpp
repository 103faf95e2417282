#include "fml/exact_sum.hpp"

#include <cmath>

namespace fml {

ExactSum::ExactSum(std::span<const double> terms) {
  for (double t : terms) add(t);
}

void ExactSum::add(double x) {
  std::size_t i = 0;
  for (double y : partials_) {
    if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) partials_[i++] = lo;
    x = hi;
  }
  partials_.resize(i);
  partials_.push_back(x);
}

void ExactSum::add(const ExactSum& other) {
  for (double p : other.partials_) add(p);
}

double ExactSum::value() const {
  if (partials_.empty()) return 0.0;
  // Partials are non-overlapping and increasing in magnitude; fold from the
  // top and correct the final half-way rounding case.
  std::size_t n = partials_.size();
  double hi = partials_[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials_[--n];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                (lo > 0.0 && partials_[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    const double yr = x - hi;
    if (y == yr) hi = x;
  }
  return hi;
}

int ExactSum::sign() const {
  const double v = value();
  return (v > 0.0) - (v < 0.0);
}

double exact_sum(std::span<const double> terms) { return ExactSum(terms).value(); }

}  // namespace fml
