#pragma once

#include <span>
#include <string>
#include <vector>

#include "fml/word.hpp"

namespace fml {

/// S(x) = ratio * R x + translation. An empty rotation means the identity;
/// otherwise it is a row-major d x d orthogonal matrix.
struct SimilarityMap {
  double ratio = 0.5;
  std::vector<double> translation;
  std::vector<double> rotation;

  std::size_t dimension() const { return translation.size(); }
  std::vector<double> apply(std::span<const double> x) const;
};

/// Unique s > 0 with sum_i ratios[i]^s = 1, by bisection.
///
/// The bracket starts at (1e-9, ambient_dimension] and is doubled upward
/// while the sum at the upper end still exceeds one. Throws InvalidArgument
/// for fewer than two ratios or a ratio outside (0, 1).
double solve_dimension(std::span<const double> ratios, int ambient_dimension = 1);

/// A similar IFS together with its probability vector. Only the ratios (for
/// the dimension) and the probabilities (for the measure) enter the symbolic
/// layer; translations and rotations only feed geometry rendering.
class IteratedFunctionSystem {
 public:
  IteratedFunctionSystem(std::vector<SimilarityMap> maps, std::vector<double> probabilities,
                         std::string name = {}, bool ssc_declared = true);

  /// An IFS with no geometry: only ratios and probabilities.
  static IteratedFunctionSystem symbolic(std::span<const double> ratios,
                                         std::vector<double> probabilities,
                                         std::string name = {});
  /// m equal ratios with uniform probabilities.
  static IteratedFunctionSystem uniform(int arity, double ratio, std::string name = {});

  int arity() const { return static_cast<int>(maps_.size()); }
  const std::vector<SimilarityMap>& maps() const { return maps_; }
  std::vector<double> ratios() const;
  const std::vector<double>& probabilities() const { return probabilities_; }
  double probability(std::size_t i) const { return probabilities_[i]; }
  double dimension() const { return dimension_; }
  const std::string& name() const { return name_; }
  bool ssc_declared() const { return ssc_declared_; }
  bool has_geometry() const { return ambient_dimension_ > 0; }
  int ambient_dimension() const { return ambient_dimension_; }

 private:
  std::vector<SimilarityMap> maps_;
  std::vector<double> probabilities_;
  std::string name_;
  bool ssc_declared_ = true;
  int ambient_dimension_ = 0;
  double dimension_ = 0.0;
};

/// mu(K_w) = p_{w_1} p_{w_2} ... p_{w_n}, multiplied left to right; 1 for the root.
double cube_measure(const IteratedFunctionSystem& ifs, const Word& w);

}  // namespace fml
