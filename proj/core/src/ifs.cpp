#include "fml/ifs.hpp"

#include <cmath>
#include <numeric>

#include "fml/errors.hpp"

namespace fml {

namespace {

double power_sum(std::span<const double> ratios, double s) {
  double total = 0.0;
  for (double r : ratios) total += std::pow(r, s);
  return total;
}

void check_orthogonal(const std::vector<double>& rotation, std::size_t d) {
  if (rotation.size() != d * d) {
    throw InvalidArgument("rotation must be a " + std::to_string(d) + "x" +
                          std::to_string(d) + " matrix");
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += rotation[k * d + i] * rotation[k * d + j];
      if (std::fabs(dot - (i == j ? 1.0 : 0.0)) > 1e-9) {
        throw InvalidArgument("rotation matrix is not orthogonal");
      }
    }
  }
}

}  // namespace

std::vector<double> SimilarityMap::apply(std::span<const double> x) const {
  const std::size_t d = translation.size();
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    double rx = 0.0;
    if (rotation.empty()) {
      rx = x[i];
    } else {
      for (std::size_t k = 0; k < d; ++k) rx += rotation[i * d + k] * x[k];
    }
    out[i] = ratio * rx + translation[i];
  }
  return out;
}

double solve_dimension(std::span<const double> ratios, int ambient_dimension) {
  if (ratios.size() < 2) {
    throw InvalidArgument("dimension equation needs at least two maps");
  }
  for (double r : ratios) {
    if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("contraction ratio must lie in (0,1)");
  }
  double lo = 1e-9;
  double hi = std::max(1, ambient_dimension);
  while (power_sum(ratios, hi) > 1.0) {
    lo = hi;
    hi *= 2.0;
  }
  // s -> sum r_i^s is strictly decreasing; sum > 1 at lo, <= 1 at hi.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (power_sum(ratios, mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double rlo = std::fabs(power_sum(ratios, lo) - 1.0);
  const double rhi = std::fabs(power_sum(ratios, hi) - 1.0);
  return rlo < rhi ? lo : hi;
}

IteratedFunctionSystem::IteratedFunctionSystem(std::vector<SimilarityMap> maps,
                                               std::vector<double> probabilities,
                                               std::string name, bool ssc_declared)
    : maps_(std::move(maps)),
      probabilities_(std::move(probabilities)),
      name_(std::move(name)),
      ssc_declared_(ssc_declared) {
  if (maps_.size() < 2) throw InvalidArgument("an IFS needs at least two maps");
  if (maps_.size() > static_cast<std::size_t>(kMaxArity)) {
    throw InvalidArgument("at most " + std::to_string(kMaxArity) + " maps are supported");
  }
  if (probabilities_.size() != maps_.size()) {
    throw InvalidArgument("probability vector length must equal the number of maps");
  }
  for (double p : probabilities_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidArgument("probabilities must be >= 0");
  }
  const double total = std::accumulate(probabilities_.begin(), probabilities_.end(), 0.0);
  if (std::fabs(total - 1.0) > 1e-12) throw InvalidArgument("probabilities must sum to 1");

  const std::size_t d = maps_.front().dimension();
  for (const SimilarityMap& m : maps_) {
    if (m.dimension() != d) throw InvalidArgument("all translations must share one dimension");
    if (!m.rotation.empty()) check_orthogonal(m.rotation, d);
  }
  ambient_dimension_ = static_cast<int>(d);
  const std::vector<double> r = ratios();
  dimension_ = solve_dimension(r, std::max(1, ambient_dimension_));
}

IteratedFunctionSystem IteratedFunctionSystem::symbolic(std::span<const double> ratios,
                                                        std::vector<double> probabilities,
                                                        std::string name) {
  std::vector<SimilarityMap> maps;
  maps.reserve(ratios.size());
  for (double r : ratios) maps.push_back(SimilarityMap{r, {}, {}});
  return IteratedFunctionSystem(std::move(maps), std::move(probabilities), std::move(name));
}

IteratedFunctionSystem IteratedFunctionSystem::uniform(int arity, double ratio,
                                                       std::string name) {
  if (arity < 2) throw InvalidArgument("an IFS needs at least two maps");
  std::vector<double> ratios(static_cast<std::size_t>(arity), ratio);
  std::vector<double> probs(static_cast<std::size_t>(arity), 1.0 / arity);
  return symbolic(ratios, std::move(probs), std::move(name));
}

std::vector<double> IteratedFunctionSystem::ratios() const {
  std::vector<double> out;
  out.reserve(maps_.size());
  for (const SimilarityMap& m : maps_) out.push_back(m.ratio);
  return out;
}

double cube_measure(const IteratedFunctionSystem& ifs, const Word& w) {
  w.validate(ifs.arity());
  double mu = 1.0;
  for (Word::Symbol s : w.symbols()) mu *= ifs.probability(s);
  return mu;
}

}  // namespace fml
