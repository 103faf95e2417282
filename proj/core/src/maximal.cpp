#include "fml/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "fml/errors.hpp"
#include "fml/tree_layout.hpp"

namespace fml {

namespace {

struct SubtreeSums {
  TreeLayout layout;
  std::vector<double> mu;
  std::vector<double> integral;  // int_{K_node} f dmu
};

SubtreeSums subtree_sums(const IteratedFunctionSystem& ifs, const CylinderFunction& f) {
  if (ifs.arity() != f.arity()) throw InvalidArgument("function arity does not match the IFS");
  SubtreeSums s{TreeLayout(f.arity(), f.depth()), {}, {}};
  s.mu = node_measures(ifs, s.layout);
  s.integral.assign(s.mu.size(), 0.0);
  const std::size_t m = static_cast<std::size_t>(f.arity());
  const std::size_t leaf_off = s.layout.leaf_offset();
  for (std::size_t j = 0; j < f.leaf_count(); ++j) {
    s.integral[leaf_off + j] = s.mu[leaf_off + j] * f.value_at(j);
  }
  for (int k = f.depth() - 1; k >= 0; --k) {
    const std::size_t off = s.layout.offset(k);
    const std::size_t child_off = s.layout.offset(k + 1);
    for (std::size_t j = 0; j < s.layout.level_size(k); ++j) {
      double total = 0.0;
      for (std::size_t c = 0; c < m; ++c) total += s.integral[child_off + j * m + c];
      s.integral[off + j] = total;
    }
  }
  return s;
}

// Average over node (level, index); the leaf level returns the leaf value.
double node_average(const SubtreeSums& s, const CylinderFunction& f, int level, std::size_t index,
                    bool& defined) {
  if (level == f.depth()) {
    defined = true;
    return f.value_at(index);
  }
  const std::size_t node = s.layout.offset(level) + index;
  defined = s.mu[node] > 0.0;
  return defined ? s.integral[node] / s.mu[node] : 0.0;
}

}  // namespace

CylinderFunction truncated_maximal_operator(const IteratedFunctionSystem& ifs,
                                            const CylinderFunction& f, int max_level) {
  if (max_level < 0) throw InvalidArgument("truncation level must be nonnegative");
  const SubtreeSums s = subtree_sums(ifs, f);
  const std::size_t m = static_cast<std::size_t>(f.arity());
  const int top = std::min(max_level, f.depth());

  // best[j] on the current level: max average over ancestors at levels <= current.
  std::vector<double> best(1, 0.0);
  bool defined = false;
  const double root = node_average(s, f, 0, 0, defined);
  if (defined) best[0] = root;
  for (int k = 1; k <= f.depth(); ++k) {
    std::vector<double> next(s.layout.level_size(k));
    for (std::size_t j = 0; j < next.size(); ++j) {
      double v = best[j / m];
      if (k <= top) {
        const double avg = node_average(s, f, k, j, defined);
        if (defined) v = std::max(v, avg);
      }
      next[j] = v;
    }
    best = std::move(next);
  }
  return CylinderFunction(f.arity(), f.depth(), std::move(best));
}

CylinderFunction maximal_operator(const IteratedFunctionSystem& ifs, const CylinderFunction& f) {
  return truncated_maximal_operator(ifs, f, f.depth());
}

CylinderFunction indicator_maximal_closed_form(const IteratedFunctionSystem& ifs, const Word& w,
                                               int target_depth) {
  if (static_cast<std::size_t>(target_depth) < w.depth()) {
    throw InvalidArgument("target depth must be at least the word length");
  }
  w.validate(ifs.arity());
  const std::size_t k = w.depth();
  const double mu_w = cube_measure(ifs, w);

  // ring_value[j]: value on K_{w|j} minus K_{w|j+1}; a_{k-j} in the ring numbering.
  std::vector<double> ring_value(k + 1, 1.0);
  for (std::size_t j = 0; j < k; ++j) {
    const double mu_prefix = cube_measure(ifs, w.prefix(j));
    ring_value[j] = mu_prefix > 0.0 ? mu_w / mu_prefix : 0.0;
  }

  const TreeLayout layout(ifs.arity(), target_depth);
  std::vector<double> values(layout.leaf_count());
  for (std::size_t leaf = 0; leaf < values.size(); ++leaf) {
    const Word x = layout.word_at(target_depth, leaf);
    std::size_t common = 0;
    while (common < k && x[common] == w[common]) ++common;
    values[leaf] = ring_value[common];
  }
  return CylinderFunction(ifs.arity(), target_depth, std::move(values));
}

AncestorAverages ancestor_average_trace(const IteratedFunctionSystem& ifs,
                                        const CylinderFunction& f, const Word& leaf) {
  const std::size_t leaf_index = f.leaf_index(leaf);
  const SubtreeSums s = subtree_sums(ifs, f);
  AncestorAverages out{leaf, std::vector<double>(static_cast<std::size_t>(f.depth()) + 1, 0.0)};
  for (int k = 0; k <= f.depth(); ++k) {
    std::size_t index = leaf_index;
    for (int up = f.depth(); up > k; --up) index /= static_cast<std::size_t>(f.arity());
    bool defined = false;
    out.averages[static_cast<std::size_t>(k)] = node_average(s, f, k, index, defined);
  }
  return out;
}

double weak_type_constant(ContentExponent rho) {
  return 4.0 * std::pow(rho.value(), -rho.value());
}

std::vector<WeakTypePoint> weak_type_profile(const IteratedFunctionSystem& ifs,
                                             const CylinderFunction& f, ContentExponent rho,
                                             std::span<const double> thresholds) {
  const CylinderFunction mf = maximal_operator(ifs, f);
  const double integral = p_choquet_integral(ifs, f, rho.value(), rho);
  const double c = weak_type_constant(rho);
  const std::vector<LevelContent> levels = superlevel_contents(ifs, mf.depth(), mf.values(), rho);

  std::vector<WeakTypePoint> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    if (!(t > 0.0)) throw InvalidArgument("thresholds must be positive");
    // {Mf > t} = {Mf >= v} for the smallest value v > t.
    auto it = std::upper_bound(levels.begin(), levels.end(), t,
                               [](double x, const LevelContent& lc) { return x < lc.level; });
    const double content = it == levels.end() ? 0.0 : it->content;
    const double bound = c * std::pow(t, -rho.value()) * integral;
    out.push_back(WeakTypePoint{t, content, bound, bound - content});
  }
  return out;
}

}  // namespace fml
