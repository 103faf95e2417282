#pragma once

#include <span>
#include <vector>

#include "fml/choquet.hpp"
#include "fml/content.hpp"
#include "fml/ifs.hpp"
#include "fml/word.hpp"

namespace fml {

/// Dyadic maximal function of a cylinder function: at each leaf, the largest
/// mu-average of f over the basic cubes containing it. Cubes strictly inside
/// a leaf see the constant leaf value, so ancestors up to the leaf itself
/// realize the supremum exactly.
///
/// Averages come from subtree sums accumulated bottom-up; the leaf's own
/// average is its value. Null cubes (mu = 0) above the leaves are skipped.
CylinderFunction maximal_operator(const IteratedFunctionSystem& ifs, const CylinderFunction& f);

/// Same supremum restricted to cubes of depth <= max_level.
CylinderFunction truncated_maximal_operator(const IteratedFunctionSystem& ifs,
                                            const CylinderFunction& f, int max_level);

/// M(chi_{K_w}) built directly: 1 on K_w, mu(K_w)/mu(K_{w|j}) on the ring
/// K_{w|j} \ K_{w|j+1} for j = 0..|w|-1 (the j = 0 ring being K minus K_{w|1}).
CylinderFunction indicator_maximal_closed_form(const IteratedFunctionSystem& ifs, const Word& w,
                                               int target_depth);

struct AncestorAverages {
  Word word;
  std::vector<double> averages;  // averages[k]: mean of f over the depth-k ancestor
};

AncestorAverages ancestor_average_trace(const IteratedFunctionSystem& ifs,
                                        const CylinderFunction& f, const Word& leaf);

/// 4 rho^{-rho}.
double weak_type_constant(ContentExponent rho);

struct WeakTypePoint {
  double threshold = 0.0;
  double content = 0.0;  // H({Mf > t})
  double bound = 0.0;    // 4 rho^{-rho} t^{-rho} * int f^rho dH
  double margin = 0.0;   // bound - content
};

std::vector<WeakTypePoint> weak_type_profile(const IteratedFunctionSystem& ifs,
                                             const CylinderFunction& f, ContentExponent rho,
                                             std::span<const double> thresholds);

}  // namespace fml
