#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace fml {

/// Largest alphabet size: symbols are written as 0-9 then a-z.
inline constexpr int kMaxArity = 36;

/// A finite symbol string addressing the basic cube K_w. The empty word is
/// the whole attractor K.
class Word {
 public:
  using Symbol = std::uint8_t;

  Word() = default;
  explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}
  Word(std::initializer_list<int> symbols);

  /// Parses digits/letters ("0", "01", "a3"); "root" or "" is the empty word.
  static Word parse(std::string_view text, int arity);

  std::size_t depth() const { return symbols_.size(); }
  bool is_root() const { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const Symbol> symbols() const { return symbols_; }

  Word prefix(std::size_t length) const;
  Word child(Symbol s) const;
  Word parent() const;

  /// True when *this is a (not necessarily proper) prefix of other, i.e.
  /// K_other is contained in K_this.
  bool is_prefix_of(const Word& other) const;
  bool comparable(const Word& other) const {
    return is_prefix_of(other) || other.is_prefix_of(*this);
  }

  /// Throws InvalidArgument if a symbol is not below `arity`.
  void validate(int arity) const;

  std::string to_string() const;

  /// Canonical order: shorter words first, then lexicographic.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);
  friend bool operator==(const Word& a, const Word& b) = default;

 private:
  std::vector<Symbol> symbols_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

/// A finite union of basic cubes stored as a canonical antichain: no cell is
/// a prefix of another, cells are kept in canonical Word order. The set of
/// all proper prefixes (the trie interior) is kept alongside for O(depth)
/// membership queries.
class CellSet {
 public:
  CellSet() = default;

  /// Builds from words that must already be pairwise incomparable.
  static CellSet from_antichain(std::vector<Word> words, int arity);

  const std::vector<Word>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }
  std::size_t max_depth() const;

  /// K_w lies inside the union (some cell is a prefix of w).
  bool contains_cube(const Word& w) const;
  /// K_w intersects the union.
  bool meets(const Word& w) const;
  /// True when w is a proper prefix of some cell.
  bool is_interior(const Word& w) const { return interior_.contains(w); }
  /// Point-set inclusion: other is a subset of *this.
  bool includes(const CellSet& other) const;

  /// Replaces every complete sibling group by its parent, recursively. The
  /// point set is unchanged.
  CellSet coarsened(int arity) const;

  friend bool operator==(const CellSet& a, const CellSet& b) {
    return a.cells_ == b.cells_;
  }

 private:
  explicit CellSet(std::vector<Word> sorted_antichain);

  std::vector<Word> cells_;
  std::unordered_set<Word, WordHash> members_;
  std::unordered_set<Word, WordHash> interior_;
};

/// Keeps the maximal cubes of an arbitrary word list: any word having another
/// input word as a prefix is dropped, duplicates collapse.
CellSet disjointify(std::span<const Word> words, int arity);

CellSet set_union(const CellSet& a, const CellSet& b, int arity);
CellSet set_intersection(const CellSet& a, const CellSet& b, int arity);

/// All m^depth words of the given length in lexicographic order.
std::vector<Word> words_of_depth(int arity, int depth);

}  // namespace fml
