#include <doctest.h>

#include "fml/content.hpp"
#include "fml/errors.hpp"
#include "fml/exact_sum.hpp"
#include "fml/harness.hpp"
#include "fml/random.hpp"
#include "fml/word.hpp"
#include "oracles.hpp"

using namespace fml;

namespace {

std::vector<Word> parse_all(std::initializer_list<const char*> texts, int arity = 2) {
  std::vector<Word> out;
  for (const char* t : texts) out.push_back(Word::parse(t, arity));
  return out;
}

}  // namespace

TEST_CASE("word parsing and printing") {
  CHECK(Word::parse("0110", 2).to_string() == "0110");
  CHECK(Word::parse("root", 2).is_root());
  CHECK(Word::parse("", 2).is_root());
  CHECK(Word{}.to_string() == "root");
  CHECK(Word::parse("3a", 11).to_string() == "3a");
  CHECK_THROWS_AS(Word::parse("012", 2), InvalidArgument);
  CHECK_THROWS_AS(Word::parse("0x", 4), InvalidArgument);
}

TEST_CASE("prefix relation and canonical order") {
  const Word a = Word::parse("01", 2);
  const Word b = Word::parse("011", 2);
  CHECK(a.is_prefix_of(b));
  CHECK(a.is_prefix_of(a));
  CHECK_FALSE(b.is_prefix_of(a));
  CHECK(Word{}.is_prefix_of(b));
  CHECK_FALSE(Word::parse("00", 2).comparable(Word::parse("01", 2)));
  CHECK(Word::parse("1", 2) < Word::parse("00", 2));  // shorter first
  CHECK(Word::parse("00", 2) < Word::parse("01", 2));
  CHECK(b.parent() == a);
  CHECK(a.child(1) == b);
}

TEST_CASE("disjointify examples") {
  CHECK(disjointify(parse_all({"0", "01", "1"}), 2).cells() == parse_all({"0", "1"}));
  CHECK(disjointify(parse_all({"00", "01", "10"}), 2).cells() == parse_all({"00", "01", "10"}));
  CHECK(disjointify(parse_all({"0", "0"}), 2).cells() == parse_all({"0"}));
  CHECK(disjointify({}, 2).empty());
  CHECK_THROWS_AS(disjointify(std::vector<Word>{Word{0, 2}}, 2), InvalidArgument);
}

TEST_CASE("from_antichain rejects comparable words") {
  CHECK_THROWS_AS(CellSet::from_antichain(parse_all({"0", "01"}), 2), InvalidArgument);
  CHECK_NOTHROW(CellSet::from_antichain(parse_all({"00", "01"}), 2));
}

TEST_CASE("disjointify properties on random word lists") {
  const auto ifs = testing::quaternary_biased();
  SplitMix64 rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Word> words;
    const auto n = 1 + rng.below(12);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::vector<Word::Symbol> s(rng.below(5));
      for (auto& x : s) x = static_cast<Word::Symbol>(rng.below(4));
      words.emplace_back(std::move(s));
    }
    const CellSet out = disjointify(words, 4);
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = i + 1; j < out.size(); ++j) {
        CHECK_FALSE(out.cells()[i].comparable(out.cells()[j]));
      }
    }
    for (const Word& w : words) CHECK(out.contains_cube(w));
    CHECK(disjointify(out.cells(), 4) == out);
    for (double rho : {0.1, 0.5, 1.0}) {
      double in_sum = 0.0;
      double out_sum = 0.0;
      for (const Word& w : words) in_sum += cube_weight(ifs, w, ContentExponent(rho));
      for (const Word& w : out.cells()) out_sum += cube_weight(ifs, w, ContentExponent(rho));
      CHECK(out_sum <= in_sum * (1 + 1e-15));
    }
  }
}

TEST_CASE("cell set queries") {
  const CellSet e = disjointify(parse_all({"00", "1"}), 2);
  CHECK(e.contains_cube(Word::parse("00", 2)));
  CHECK(e.contains_cube(Word::parse("101", 2)));
  CHECK_FALSE(e.contains_cube(Word::parse("0", 2)));
  CHECK(e.meets(Word::parse("0", 2)));
  CHECK(e.meets(Word{}));
  CHECK_FALSE(e.meets(Word::parse("01", 2)));
  CHECK(e.max_depth() == 2);
  CHECK(e.includes(disjointify(parse_all({"000", "11"}), 2)));
  CHECK_FALSE(e.includes(disjointify(parse_all({"0"}), 2)));
}

TEST_CASE("coarsening merges complete sibling groups only") {
  const CellSet full = disjointify(parse_all({"00", "01", "10", "11"}), 2);
  CHECK(full.coarsened(2).cells() == std::vector<Word>{Word{}});
  const CellSet partial = disjointify(parse_all({"00", "01", "10"}), 2);
  CHECK(partial.coarsened(2).cells() == parse_all({"0", "10"}));
}

TEST_CASE("union and intersection") {
  const CellSet a = disjointify(parse_all({"0", "10"}), 2);
  const CellSet b = disjointify(parse_all({"01", "1"}), 2);
  CHECK(set_union(a, b, 2).cells() == parse_all({"0", "1"}));
  CHECK(set_intersection(a, b, 2).cells() == parse_all({"01", "10"}));
  CHECK(set_intersection(a, CellSet{}, 2).empty());
}

TEST_CASE("words_of_depth enumerates lexicographically") {
  const auto w = words_of_depth(3, 2);
  REQUIRE(w.size() == 9);
  CHECK(w.front().to_string() == "00");
  CHECK(w[5].to_string() == "12");
  CHECK(words_of_depth(2, 0) == std::vector<Word>{Word{}});
}

TEST_CASE("exact sum is order independent and correctly rounded") {
  const double a[] = {1e16, 1.0, -1e16, 1.0};
  CHECK(exact_sum(a) == 2.0);
  const double b[] = {0.1, 0.2, 0.3};
  const double c[] = {0.3, 0.2, 0.1};
  CHECK(exact_sum(b) == exact_sum(c));
  CHECK(exact_sum({}) == 0.0);
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> xs;
    for (int i = 0; i < 20; ++i) xs.push_back(rng.uniform(-1, 1) * std::ldexp(1.0, static_cast<int>(rng.below(60)) - 30));
    std::vector<double> ys(xs.rbegin(), xs.rend());
    CHECK(exact_sum(xs) == exact_sum(ys));
    ExactSum s(xs);
    s.add(-exact_sum(xs));
    CHECK(std::fabs(s.value()) <= std::ldexp(1.0, -20));
  }
}
