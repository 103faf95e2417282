#include "fml/tree_layout.hpp"

#include "fml/errors.hpp"

namespace fml {

TreeLayout::TreeLayout(int arity, int depth, std::size_t max_leaves)
    : arity_(arity), depth_(depth) {
  if (arity < 2) throw InvalidArgument("tree arity must be at least 2");
  if (depth < 0) throw InvalidArgument("tree depth must be nonnegative");
  std::size_t size = 1;
  std::size_t off = 0;
  for (int k = 0; k <= depth; ++k) {
    level_size_.push_back(size);
    offset_.push_back(off);
    off += size;
    if (k < depth) {
      if (size > max_leaves / static_cast<std::size_t>(arity)) {
        throw ResourceLimitError("depth " + std::to_string(depth) + " with arity " +
                                 std::to_string(arity) + " exceeds the leaf budget of " +
                                 std::to_string(max_leaves));
      }
      size *= static_cast<std::size_t>(arity);
    }
  }
}

std::size_t TreeLayout::index_of(const Word& w) const {
  if (w.depth() > static_cast<std::size_t>(depth_)) {
    throw InvalidArgument("word deeper than the tree");
  }
  w.validate(arity_);
  std::size_t j = 0;
  for (Word::Symbol s : w.symbols()) j = j * static_cast<std::size_t>(arity_) + s;
  return j;
}

Word TreeLayout::word_at(int level, std::size_t index) const {
  std::vector<Word::Symbol> symbols(static_cast<std::size_t>(level));
  for (int k = level - 1; k >= 0; --k) {
    symbols[static_cast<std::size_t>(k)] =
        static_cast<Word::Symbol>(index % static_cast<std::size_t>(arity_));
    index /= static_cast<std::size_t>(arity_);
  }
  return Word(std::move(symbols));
}

std::vector<double> node_measures(const IteratedFunctionSystem& ifs, const TreeLayout& layout) {
  if (ifs.arity() != layout.arity()) throw InvalidArgument("IFS arity does not match tree");
  const std::size_t m = static_cast<std::size_t>(layout.arity());
  std::vector<double> mu(layout.node_count());
  mu[0] = 1.0;
  for (int k = 0; k < layout.depth(); ++k) {
    const std::size_t off = layout.offset(k);
    const std::size_t child_off = layout.offset(k + 1);
    for (std::size_t j = 0; j < layout.level_size(k); ++j) {
      for (std::size_t c = 0; c < m; ++c) mu[child_off + j * m + c] = mu[off + j] * ifs.probability(c);
    }
  }
  return mu;
}

}  // namespace fml
