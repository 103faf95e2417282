#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fml/ifs.hpp"
#include "fml/word.hpp"

namespace fml {

/// The content exponent rho = alpha / s, restricted to (0, 1].
class ContentExponent {
 public:
  explicit ContentExponent(double rho);
  static ContentExponent from_alpha(double alpha, double dimension);

  double value() const { return rho_; }

 private:
  double rho_;
};

/// mu^rho computed as exp(rho * log mu); exact for rho == 1 and mu == 0.
double measure_power(double mu, double rho);

/// mu(K_w)^rho, the cost of using K_w in a cover.
double cube_weight(const IteratedFunctionSystem& ifs, const Word& w, ContentExponent rho);

struct ContentResult {
  double value = 0.0;
  CellSet cover;  // an optimal antichain cover (coarsest among ties)
};

/// Exact Hausdorff content of a finite cell union and an optimal cover.
///
/// Tree DP over the trie of E: a node outside E costs 0, a cell of E costs
/// its own weight, and an interior node costs min(weight, sum of children).
/// Sums are carried as exact expansions, so the comparison against the
/// parent weight is exact and ties keep the parent.
ContentResult optimal_cover(const IteratedFunctionSystem& ifs, const CellSet& cells,
                            ContentExponent rho);

double hausdorff_content(const IteratedFunctionSystem& ifs, const CellSet& cells,
                         ContentExponent rho);

/// Number of antichain covers of E by cubes of depth <= max_depth that each
/// meet E and none of which lies strictly inside a cell of E. Saturates at
/// UINT64_MAX.
std::uint64_t count_covers(const CellSet& cells, int arity, int max_depth);

/// Minimum of sum mu^rho over every antichain cover counted by count_covers,
/// found by explicit enumeration. Each cover is
/// summed exactly. Throws ResourceLimitError when the number of covers
/// exceeds cover_limit.
double brute_force_content(const IteratedFunctionSystem& ifs, const CellSet& cells,
                           ContentExponent rho, int max_depth,
                           std::uint64_t cover_limit = 10'000'000);

struct LevelContent {
  double level = 0.0;    // a distinct positive leaf value v
  double content = 0.0;  // H({f >= v})
};

/// Contents of every super-level set {f >= v} of a function given by its
/// leaf values at `depth` (lexicographic leaf order), ascending in v. Leaves
/// are inserted in decreasing value order and the DP is repaired along each
/// inserted leaf's ancestor path only.
std::vector<LevelContent> superlevel_contents(const IteratedFunctionSystem& ifs, int depth,
                                              std::span<const double> leaf_values,
                                              ContentExponent rho);

}  // namespace fml
