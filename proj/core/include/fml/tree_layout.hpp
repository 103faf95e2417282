#pragma once

#include <cstddef>
#include <vector>

#include "fml/ifs.hpp"
#include "fml/word.hpp"

namespace fml {

/// Level-order indexing of the complete m-ary tree down to a fixed depth.
/// Node j of level k sits at offset(k) + j; its children are m*j + c on
/// level k+1. Leaf j of the deepest level is the word with base-m digits j.
class TreeLayout {
 public:
  /// Throws ResourceLimitError when m^depth exceeds max_leaves.
  TreeLayout(int arity, int depth, std::size_t max_leaves = std::size_t{1} << 24);

  int arity() const { return arity_; }
  int depth() const { return depth_; }
  std::size_t leaf_count() const { return level_size_.back(); }
  std::size_t node_count() const { return offset_.back() + level_size_.back(); }
  std::size_t level_size(int level) const { return level_size_[static_cast<std::size_t>(level)]; }
  std::size_t offset(int level) const { return offset_[static_cast<std::size_t>(level)]; }
  std::size_t leaf_offset() const { return offset_.back(); }

  /// Index of w within its own level (base-m digits of w).
  std::size_t index_of(const Word& w) const;
  Word word_at(int level, std::size_t index) const;

 private:
  int arity_;
  int depth_;
  std::vector<std::size_t> level_size_;
  std::vector<std::size_t> offset_;
};

/// mu of every node in level order, each the left-to-right product of the
/// symbol probabilities along its word (bit-identical to cube_measure).
std::vector<double> node_measures(const IteratedFunctionSystem& ifs, const TreeLayout& layout);

}  // namespace fml
