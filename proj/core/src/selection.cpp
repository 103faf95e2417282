#include "fml/selection.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <unordered_map>

#include "fml/errors.hpp"
#include "fml/exact_sum.hpp"

namespace fml {

std::vector<Word> SelectionResult::selected_words() const {
  std::vector<Word> out;
  out.reserve(selected.size());
  for (std::size_t i : selected) out.push_back(input[i]);
  return out;
}

SelectionOrder parse_selection_order(std::string_view name) {
  if (name == "input") return SelectionOrder::input;
  if (name == "lex") return SelectionOrder::lex;
  if (name == "measure") return SelectionOrder::measure;
  throw InvalidArgument("unknown selection order '" + std::string(name) + "'");
}

std::vector<Word> order_cubes(const IteratedFunctionSystem& ifs, std::vector<Word> cubes,
                              SelectionOrder order) {
  switch (order) {
    case SelectionOrder::input:
      break;
    case SelectionOrder::lex:
      std::sort(cubes.begin(), cubes.end());
      break;
    case SelectionOrder::measure:
      std::stable_sort(cubes.begin(), cubes.end(), [&](const Word& a, const Word& b) {
        const double ma = cube_measure(ifs, a);
        const double mb = cube_measure(ifs, b);
        return ma > mb || (ma == mb && a < b);
      });
      break;
  }
  return cubes;
}

double covering_constant(double sigma) { return 1.0 + 1.0 / sigma; }

double splitting_constant(double sigma) {
  return sigma == 1.0 ? 2.0 : (1.0 + sigma) * (1.0 + 1.0 / sigma);
}

SelectionResult select_subfamily(const IteratedFunctionSystem& ifs, std::span<const Word> cubes,
                                 ContentExponent rho, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  // Validates symbols and the antichain property.
  CellSet::from_antichain(std::vector<Word>(cubes.begin(), cubes.end()), ifs.arity());

  SelectionResult result;
  result.input.assign(cubes.begin(), cubes.end());
  result.sigma = sigma;
  std::unordered_map<Word, ExactSum, WordHash> sums;

  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const Word& cube = cubes[i];
    const double w = cube_weight(ifs, cube, rho);
    bool fits = true;
    for (std::size_t k = 0; k <= cube.depth() && fits; ++k) {
      const Word ancestor = cube.prefix(k);
      ExactSum trial;
      if (auto it = sums.find(ancestor); it != sums.end()) trial = it->second;
      trial.add(w);
      fits = trial.value() <= (1.0 + sigma) * cube_weight(ifs, ancestor, rho);
    }
    if (!fits) continue;
    result.selected.push_back(i);
    for (std::size_t k = 0; k <= cube.depth(); ++k) sums[cube.prefix(k)].add(w);
  }
  for (const auto& [node, sum] : sums) result.per_node_sums.emplace(node, sum.value());
  return result;
}

SelectionCertificate certify_selection(const IteratedFunctionSystem& ifs,
                                       const SelectionResult& result, ContentExponent rho,
                                       const CylinderFunction& f) {
  SelectionCertificate cert;
  const std::vector<Word> chosen = result.selected_words();

  // (i): every node that has a selected cube below it.
  std::set<Word> nodes;
  for (const Word& c : chosen) {
    for (std::size_t k = 0; k <= c.depth(); ++k) nodes.insert(c.prefix(k));
  }
  cert.packing_margin = std::numeric_limits<double>::infinity();
  for (const Word& node : nodes) {
    std::vector<double> below;
    for (const Word& c : chosen) {
      if (node.is_prefix_of(c)) below.push_back(cube_weight(ifs, c, rho));
    }
    const double sum = exact_sum(below);
    const double cap = (1.0 + result.sigma) * cube_weight(ifs, node, rho);
    cert.packing_margin = std::min(cert.packing_margin, cap - sum);
    if (sum > cap) cert.packing_holds = false;
  }
  cert.nodes_checked = nodes.size();
  if (nodes.empty()) cert.packing_margin = 0.0;

  // (ii)
  const CellSet all = disjointify(result.input, ifs.arity());
  cert.covering_lhs = hausdorff_content(ifs, all, rho);
  std::vector<double> weights;
  for (const Word& c : chosen) weights.push_back(cube_weight(ifs, c, rho));
  cert.covering_rhs = covering_constant(result.sigma) * exact_sum(weights);

  // (iii)
  if (all.max_depth() > static_cast<std::size_t>(f.depth())) {
    throw InvalidArgument("function depth must cover the deepest input cube");
  }
  ExactSum pieces;
  for (const Word& c : chosen) pieces.add(choquet_integral(ifs, restrict_to(f, c), rho));
  cert.splitting_lhs = pieces.value();
  const CellSet chosen_union = CellSet::from_antichain(chosen, ifs.arity());
  cert.splitting_rhs =
      splitting_constant(result.sigma) * choquet_integral(ifs, restrict_to(f, chosen_union), rho);
  return cert;
}

}  // namespace fml
