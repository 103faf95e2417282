#include "fml/word.hpp"

#include <algorithm>
#include <map>

#include "fml/errors.hpp"

namespace fml {

namespace {

char symbol_char(Word::Symbol s) {
  return s < 10 ? static_cast<char>('0' + s) : static_cast<char>('a' + (s - 10));
}

int char_symbol(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  return -1;
}

}  // namespace

Word::Word(std::initializer_list<int> symbols) {
  symbols_.reserve(symbols.size());
  for (int s : symbols) {
    if (s < 0 || s >= kMaxArity) throw InvalidArgument("word symbol out of range");
    symbols_.push_back(static_cast<Symbol>(s));
  }
}

Word Word::parse(std::string_view text, int arity) {
  if (text == "root") return Word{};
  std::vector<Symbol> symbols;
  symbols.reserve(text.size());
  for (char c : text) {
    const int s = char_symbol(c);
    if (s < 0 || s >= arity) {
      throw InvalidArgument("invalid symbol '" + std::string(1, c) + "' in word '" +
                            std::string(text) + "' for arity " + std::to_string(arity));
    }
    symbols.push_back(static_cast<Symbol>(s));
  }
  return Word(std::move(symbols));
}

Word Word::prefix(std::size_t length) const {
  if (length > depth()) throw InvalidArgument("prefix longer than word");
  return Word(std::vector<Symbol>(symbols_.begin(), symbols_.begin() + length));
}

Word Word::child(Symbol s) const {
  std::vector<Symbol> out = symbols_;
  out.push_back(s);
  return Word(std::move(out));
}

Word Word::parent() const {
  if (is_root()) throw InvalidArgument("root has no parent");
  return prefix(depth() - 1);
}

bool Word::is_prefix_of(const Word& other) const {
  return depth() <= other.depth() &&
         std::equal(symbols_.begin(), symbols_.end(), other.symbols_.begin());
}

void Word::validate(int arity) const {
  for (Symbol s : symbols_) {
    if (s >= arity) {
      throw InvalidArgument("word " + to_string() + " has symbol >= arity " +
                            std::to_string(arity));
    }
  }
}

std::string Word::to_string() const {
  if (symbols_.empty()) return "root";
  std::string out;
  out.reserve(symbols_.size());
  for (Symbol s : symbols_) out.push_back(symbol_char(s));
  return out;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (auto c = a.depth() <=> b.depth(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.symbols_.begin(), a.symbols_.end(),
                                                b.symbols_.begin(), b.symbols_.end());
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  // FNV-1a over the symbols plus the length.
  std::size_t h = 1469598103934665603ull ^ w.depth();
  for (Word::Symbol s : w.symbols()) {
    h ^= s;
    h *= 1099511628211ull;
  }
  return h;
}

CellSet::CellSet(std::vector<Word> sorted_antichain) : cells_(std::move(sorted_antichain)) {
  members_.reserve(cells_.size());
  for (const Word& w : cells_) {
    members_.insert(w);
    for (std::size_t k = 0; k < w.depth(); ++k) interior_.insert(w.prefix(k));
  }
}

CellSet CellSet::from_antichain(std::vector<Word> words, int arity) {
  for (const Word& w : words) w.validate(arity);
  std::sort(words.begin(), words.end());
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      if (words[i].comparable(words[j])) {
        throw InvalidArgument("cells " + words[i].to_string() + " and " +
                              words[j].to_string() + " are not incomparable");
      }
    }
  }
  return CellSet(std::move(words));
}

std::size_t CellSet::max_depth() const {
  std::size_t d = 0;
  for (const Word& w : cells_) d = std::max(d, w.depth());
  return d;
}

bool CellSet::contains_cube(const Word& w) const {
  for (std::size_t k = 0; k <= w.depth(); ++k) {
    if (members_.contains(w.prefix(k))) return true;
  }
  return false;
}

bool CellSet::meets(const Word& w) const {
  return interior_.contains(w) || contains_cube(w);
}

bool CellSet::includes(const CellSet& other) const {
  return std::all_of(other.cells_.begin(), other.cells_.end(),
                     [&](const Word& w) { return contains_cube(w); });
}

CellSet CellSet::coarsened(int arity) const {
  std::unordered_set<Word, WordHash> work(cells_.begin(), cells_.end());
  for (std::size_t d = max_depth(); d >= 1; --d) {
    std::map<Word, int> sibling_count;
    for (const Word& w : work) {
      if (w.depth() == d) ++sibling_count[w.parent()];
    }
    for (const auto& [parent, count] : sibling_count) {
      if (count != arity) continue;
      for (int s = 0; s < arity; ++s) work.erase(parent.child(static_cast<Word::Symbol>(s)));
      work.insert(parent);
    }
  }
  std::vector<Word> out(work.begin(), work.end());
  std::sort(out.begin(), out.end());
  return CellSet(std::move(out));
}

CellSet disjointify(std::span<const Word> words, int arity) {
  std::vector<Word> sorted(words.begin(), words.end());
  for (const Word& w : sorted) w.validate(arity);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  // Shorter words come first, so every potential covering prefix is already
  // in `kept` when a word is examined.
  std::unordered_set<Word, WordHash> kept;
  std::vector<Word> out;
  for (const Word& w : sorted) {
    bool covered = false;
    for (std::size_t k = 0; k < w.depth() && !covered; ++k) covered = kept.contains(w.prefix(k));
    if (!covered) {
      kept.insert(w);
      out.push_back(w);
    }
  }
  return CellSet::from_antichain(std::move(out), arity);
}

CellSet set_union(const CellSet& a, const CellSet& b, int arity) {
  std::vector<Word> all = a.cells();
  all.insert(all.end(), b.cells().begin(), b.cells().end());
  return disjointify(all, arity);
}

CellSet set_intersection(const CellSet& a, const CellSet& b, int arity) {
  std::vector<Word> out;
  for (const Word& x : a.cells()) {
    for (const Word& y : b.cells()) {
      if (x.is_prefix_of(y)) {
        out.push_back(y);
      } else if (y.is_prefix_of(x)) {
        out.push_back(x);
      }
    }
  }
  return disjointify(out, arity);
}

std::vector<Word> words_of_depth(int arity, int depth) {
  std::vector<Word> out;
  std::vector<Word::Symbol> cur(static_cast<std::size_t>(depth), 0);
  while (true) {
    out.emplace_back(cur);
    int k = depth - 1;
    while (k >= 0 && cur[static_cast<std::size_t>(k)] == arity - 1) {
      cur[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
    ++cur[static_cast<std::size_t>(k)];
  }
  return out;
}

}  // namespace fml
