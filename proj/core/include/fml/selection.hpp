#pragma once

#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "fml/choquet.hpp"
#include "fml/content.hpp"
#include "fml/ifs.hpp"
#include "fml/word.hpp"

namespace fml {

struct SelectionResult {
  std::vector<Word> input;
  std::vector<std::size_t> selected;  // increasing indices into input
  // For every ancestor of a selected cube: sum of mu^rho over the selected
  // cubes below it.
  std::map<Word, double> per_node_sums;
  double sigma = 1.0;

  std::vector<Word> selected_words() const;
};

enum class SelectionOrder { input, lex, measure };

SelectionOrder parse_selection_order(std::string_view name);

/// Reorders cubes: lex (canonical word order), measure (decreasing mu, ties
/// in canonical order) or input (unchanged).
std::vector<Word> order_cubes(const IteratedFunctionSystem& ifs, std::vector<Word> cubes,
                              SelectionOrder order);

/// Greedy packing selection: scan in order and keep a cube when, for every
/// basic cube I, the selected cubes inside I still weigh at most
/// (1 + sigma) mu(I)^rho. Adding a cube only changes the sums of its own
/// ancestors, so those are the only nodes checked. Sums are exact.
SelectionResult select_subfamily(const IteratedFunctionSystem& ifs, std::span<const Word> cubes,
                                 ContentExponent rho, double sigma = 1.0);

/// Covering constant 1 + 1/sigma.
double covering_constant(double sigma);
/// Splitting constant: 2 for sigma = 1, (1 + sigma)(1 + 1/sigma) otherwise.
double splitting_constant(double sigma);

struct SelectionCertificate {
  // (i) min over nodes of (1 + sigma) mu(I)^rho - sum below I; >= 0 required.
  double packing_margin = 0.0;
  bool packing_holds = true;
  std::size_t nodes_checked = 0;
  // (ii) H(union of all input cubes) <= covering_constant * sum_selected mu^rho.
  double covering_lhs = 0.0;
  double covering_rhs = 0.0;
  // (iii) sum_k int_{I_k} f dH <= splitting_constant * int_{union I_k} f dH.
  double splitting_lhs = 0.0;
  double splitting_rhs = 0.0;

  double covering_margin() const { return covering_rhs - covering_lhs; }
  double splitting_margin() const { return splitting_rhs - splitting_lhs; }
};

/// Recomputes every packing sum from scratch and evaluates the covering and
/// integral-splitting inequalities for f (depth >= deepest input cube).
SelectionCertificate certify_selection(const IteratedFunctionSystem& ifs,
                                       const SelectionResult& result, ContentExponent rho,
                                       const CylinderFunction& f);

}  // namespace fml
