#pragma once

#include <map>
#include <span>
#include <vector>

#include "fml/content.hpp"
#include "fml/ifs.hpp"
#include "fml/word.hpp"

namespace fml {

/// A nonnegative function constant on every depth-n basic cube. Values are
/// held densely in lexicographic leaf order; the sparse word -> value view
/// (absent words are 0) is available through from_sparse / to_sparse.
class CylinderFunction {
 public:
  CylinderFunction(int arity, int depth);
  CylinderFunction(int arity, int depth, std::vector<double> leaf_values);

  static CylinderFunction constant(int arity, int depth, double c);
  /// chi_{K_w} materialized at `depth` >= |w|.
  static CylinderFunction indicator(int arity, const Word& w, int depth);
  static CylinderFunction from_sparse(int arity, int depth, const std::map<Word, double>& values);

  int arity() const { return arity_; }
  int depth() const { return depth_; }
  std::size_t leaf_count() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double value_at(std::size_t leaf_index) const { return values_[leaf_index]; }
  double value(const Word& leaf) const;
  Word leaf_word(std::size_t leaf_index) const;
  std::size_t leaf_index(const Word& leaf) const;

  double max_value() const;
  /// Nonzero leaves only.
  std::map<Word, double> to_sparse() const;

  CylinderFunction scaled(double c) const;
  CylinderFunction plus(const CylinderFunction& other) const;
  CylinderFunction truncated_at(double cap) const;  // min(f, cap)
  CylinderFunction refined(int new_depth) const;    // same function at a deeper depth

  friend bool operator==(const CylinderFunction& a, const CylinderFunction& b) = default;

 private:
  int arity_;
  int depth_;
  std::vector<double> values_;
};

/// {f > t} as maximal cubes (complete sibling groups merged).
CellSet level_set(const CylinderFunction& f, double t);

/// f * chi_{K_w}, |w| <= depth(f).
CylinderFunction restrict_to(const CylinderFunction& f, const Word& w);
/// f * chi_E for a cell union E whose cells are no deeper than f.
CylinderFunction restrict_to(const CylinderFunction& f, const CellSet& cells);

double mu_integral(const IteratedFunctionSystem& ifs, const CylinderFunction& f);

/// p * int_0^inf t^{p-1} H({f > t}) dt evaluated in closed form:
/// sum_k H({f >= v_k}) (v_k^p - v_{k-1}^p) over the sorted distinct values.
double p_choquet_integral(const IteratedFunctionSystem& ifs, const CylinderFunction& f, double p,
                          ContentExponent rho);

inline double choquet_integral(const IteratedFunctionSystem& ifs, const CylinderFunction& f,
                               ContentExponent rho) {
  return p_choquet_integral(ifs, f, 1.0, rho);
}

/// (p_choquet_integral)^{1/p}, the L^p(H) quasi-norm.
double choquet_norm(const IteratedFunctionSystem& ifs, const CylinderFunction& f, double p,
                    ContentExponent rho);

/// int f log+ f dmu with the natural logarithm.
double llogl_functional(const IteratedFunctionSystem& ifs, const CylinderFunction& f);

/// Essential supremum with respect to H: the largest value on a cube of
/// positive measure. Among cell unions the only content-null sets are unions
/// of null cubes, so this is exact for cylinder functions.
double ess_sup_norm(const IteratedFunctionSystem& ifs, const CylinderFunction& f,
                    ContentExponent rho);

}  // namespace fml
