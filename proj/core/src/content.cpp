#include "fml/content.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fml/errors.hpp"
#include "fml/exact_sum.hpp"
#include "fml/tree_layout.hpp"

namespace fml {

ContentExponent::ContentExponent(double rho) : rho_(rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("content exponent must lie in (0,1]");
}

ContentExponent ContentExponent::from_alpha(double alpha, double dimension) {
  if (!(alpha > 0.0 && alpha <= dimension)) throw InvalidArgument("alpha must lie in (0,s]");
  return ContentExponent(alpha == dimension ? 1.0 : alpha / dimension);
}

double measure_power(double mu, double rho) {
  if (rho == 1.0) return mu;
  if (mu <= 0.0) return 0.0;
  return std::exp(rho * std::log(mu));
}

double cube_weight(const IteratedFunctionSystem& ifs, const Word& w, ContentExponent rho) {
  return measure_power(cube_measure(ifs, w), rho.value());
}

namespace {

struct TrieNode {
  Word word;
  bool is_cell = false;
  std::vector<int> children;  // indices into the node array, -1 if absent
};

class CellTrie {
 public:
  CellTrie(const CellSet& cells, int arity) : arity_(arity) {
    nodes_.push_back(TrieNode{Word{}, false, std::vector<int>(static_cast<std::size_t>(arity), -1)});
    for (const Word& w : cells.cells()) {
      int cur = 0;
      for (Word::Symbol s : w.symbols()) {
        int next = nodes_[static_cast<std::size_t>(cur)].children[s];
        if (next < 0) {
          next = static_cast<int>(nodes_.size());
          Word child = nodes_[static_cast<std::size_t>(cur)].word.child(s);
          nodes_.push_back(
              TrieNode{std::move(child), false, std::vector<int>(static_cast<std::size_t>(arity), -1)});
          nodes_[static_cast<std::size_t>(cur)].children[s] = next;
        }
        cur = next;
      }
      nodes_[static_cast<std::size_t>(cur)].is_cell = true;
    }
  }

  const TrieNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return nodes_.size(); }
  int arity() const { return arity_; }

 private:
  int arity_;
  std::vector<TrieNode> nodes_;
};

struct DpState {
  ExactSum cost;
  bool take_self = true;
};

void solve_node(const IteratedFunctionSystem& ifs, const CellTrie& trie, int index, double rho,
                std::vector<DpState>& state) {
  const TrieNode& n = trie.node(index);
  const double weight = measure_power(cube_measure(ifs, n.word), rho);
  DpState& st = state[static_cast<std::size_t>(index)];
  if (n.is_cell) {
    st.cost = ExactSum{};
    st.cost.add(weight);
    st.take_self = true;
    return;
  }
  ExactSum children;
  for (int c : n.children) {
    if (c < 0) continue;
    solve_node(ifs, trie, c, rho, state);
    children.add(state[static_cast<std::size_t>(c)].cost);
  }
  ExactSum diff = children;
  diff.add(-weight);
  if (diff.sign() < 0) {
    st.cost = std::move(children);
    st.take_self = false;
  } else {
    st.cost = ExactSum{};
    st.cost.add(weight);
    st.take_self = true;
  }
}

void collect_cover(const CellTrie& trie, int index, const std::vector<DpState>& state,
                   std::vector<Word>& out) {
  const TrieNode& n = trie.node(index);
  if (state[static_cast<std::size_t>(index)].take_self) {
    out.push_back(n.word);
    return;
  }
  for (int c : n.children) {
    if (c >= 0) collect_cover(trie, c, state, out);
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::uint64_t>::max() - a ? std::numeric_limits<std::uint64_t>::max()
                                                            : a + b;
}

std::uint64_t count_from(const CellSet& cells, int arity, int max_depth, const Word& node) {
  if (!cells.meets(node)) return 1;  // contributes nothing; the empty choice
  if (cells.contains_cube(node)) return 1;  // a cube inside E is never split
  if (static_cast<int>(node.depth()) >= max_depth) return 1;
  std::uint64_t split = 1;
  for (int c = 0; c < arity; ++c) {
    const Word child = node.child(static_cast<Word::Symbol>(c));
    if (cells.meets(child)) split = saturating_mul(split, count_from(cells, arity, max_depth, child));
  }
  return saturating_add(1, split);
}

// Enumerates covers of the part of E inside K_node. Each cover is passed to
// `emit` as the list of chosen weights appended to `chosen`.
class CoverEnumerator {
 public:
  CoverEnumerator(const IteratedFunctionSystem& ifs, const CellSet& cells, double rho,
                  int max_depth)
      : ifs_(ifs), cells_(cells), rho_(rho), max_depth_(max_depth) {}

  double minimum() {
    best_ = std::numeric_limits<double>::infinity();
    std::vector<Word> pending{Word{}};
    std::vector<double> chosen;
    expand(pending, chosen);
    return best_;
  }

 private:
  // `pending` is a stack of cubes (each meeting E) still to be covered.
  void expand(std::vector<Word>& pending, std::vector<double>& chosen) {
    if (pending.empty()) {
      best_ = std::min(best_, exact_sum(chosen));
      return;
    }
    const Word node = pending.back();
    pending.pop_back();

    chosen.push_back(measure_power(cube_measure(ifs_, node), rho_));
    expand(pending, chosen);
    chosen.pop_back();

    // Splitting a cube that already lies in E cannot lower sum mu^rho for
    // rho <= 1, so only cubes straddling the boundary of E are refined.
    if (static_cast<int>(node.depth()) < max_depth_ && !cells_.contains_cube(node)) {
      std::size_t pushed = 0;
      for (int c = 0; c < ifs_.arity(); ++c) {
        Word child = node.child(static_cast<Word::Symbol>(c));
        if (cells_.meets(child)) {
          pending.push_back(std::move(child));
          ++pushed;
        }
      }
      expand(pending, chosen);
      pending.resize(pending.size() - pushed);
    }
    pending.push_back(node);
  }

  const IteratedFunctionSystem& ifs_;
  const CellSet& cells_;
  double rho_;
  int max_depth_;
  double best_ = 0.0;
};

}  // namespace

ContentResult optimal_cover(const IteratedFunctionSystem& ifs, const CellSet& cells,
                            ContentExponent rho) {
  if (cells.empty()) return ContentResult{0.0, CellSet{}};
  for (const Word& w : cells.cells()) w.validate(ifs.arity());
  const CellTrie trie(cells, ifs.arity());
  std::vector<DpState> state(trie.size());
  solve_node(ifs, trie, 0, rho.value(), state);
  std::vector<Word> cover;
  collect_cover(trie, 0, state, cover);
  return ContentResult{state[0].cost.value(), CellSet::from_antichain(std::move(cover), ifs.arity())};
}

double hausdorff_content(const IteratedFunctionSystem& ifs, const CellSet& cells,
                         ContentExponent rho) {
  return optimal_cover(ifs, cells, rho).value;
}

std::uint64_t count_covers(const CellSet& cells, int arity, int max_depth) {
  if (cells.empty()) return 1;
  return count_from(cells, arity, max_depth, Word{});
}

double brute_force_content(const IteratedFunctionSystem& ifs, const CellSet& cells,
                           ContentExponent rho, int max_depth, std::uint64_t cover_limit) {
  if (cells.empty()) return 0.0;
  if (max_depth < 0) throw InvalidArgument("max_depth must be nonnegative");
  const std::uint64_t n = count_covers(cells, ifs.arity(), max_depth);
  if (n > cover_limit) {
    throw ResourceLimitError("brute-force content would enumerate " +
                             (n == std::numeric_limits<std::uint64_t>::max() ? std::string("> 2^64")
                                                                              : std::to_string(n)) +
                             " covers (limit " + std::to_string(cover_limit) + ")");
  }
  CoverEnumerator e(ifs, cells, rho.value(), max_depth);
  return e.minimum();
}

std::vector<LevelContent> superlevel_contents(const IteratedFunctionSystem& ifs, int depth,
                                              std::span<const double> leaf_values,
                                              ContentExponent rho) {
  const TreeLayout layout(ifs.arity(), depth);
  if (leaf_values.size() != layout.leaf_count()) {
    throw InvalidArgument("leaf value count does not match m^depth");
  }
  const std::size_t m = static_cast<std::size_t>(ifs.arity());
  const std::vector<double> mu = node_measures(ifs, layout);
  std::vector<double> weight(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) weight[i] = measure_power(mu[i], rho.value());

  std::vector<std::size_t> order;
  order.reserve(leaf_values.size());
  for (std::size_t j = 0; j < leaf_values.size(); ++j) {
    if (leaf_values[j] > 0.0) order.push_back(j);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return leaf_values[a] > leaf_values[b] || (leaf_values[a] == leaf_values[b] && a < b);
  });

  // Exact costs with the same tie rule as the trie DP, so both agree bit for bit.
  std::vector<ExactSum> cost(mu.size());
  std::vector<LevelContent> out;
  std::size_t i = 0;
  while (i < order.size()) {
    const double level = leaf_values[order[i]];
    for (; i < order.size() && leaf_values[order[i]] == level; ++i) {
      std::size_t j = order[i];
      cost[layout.leaf_offset() + j] = ExactSum{};
      cost[layout.leaf_offset() + j].add(weight[layout.leaf_offset() + j]);
      for (int k = depth - 1; k >= 0; --k) {
        j /= m;
        const std::size_t first_child = layout.offset(k + 1) + j * m;
        ExactSum children;
        for (std::size_t c = 0; c < m; ++c) children.add(cost[first_child + c]);
        const std::size_t node = layout.offset(k) + j;
        ExactSum diff = children;
        diff.add(-weight[node]);
        if (diff.sign() < 0) {
          cost[node] = std::move(children);
        } else {
          cost[node] = ExactSum{};
          cost[node].add(weight[node]);
        }
      }
    }
    out.push_back(LevelContent{level, cost[0].value()});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace fml
