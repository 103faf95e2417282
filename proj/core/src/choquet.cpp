#include "fml/choquet.hpp"

#include <algorithm>
#include <cmath>

#include "fml/errors.hpp"
#include "fml/exact_sum.hpp"
#include "fml/tree_layout.hpp"

namespace fml {

namespace {

void check_value(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidArgument("cylinder function values must be finite and nonnegative");
  }
}

std::vector<double> leaf_measures(const IteratedFunctionSystem& ifs, const CylinderFunction& f) {
  if (ifs.arity() != f.arity()) throw InvalidArgument("function arity does not match the IFS");
  const TreeLayout layout(f.arity(), f.depth());
  std::vector<double> mu = node_measures(ifs, layout);
  return std::vector<double>(mu.begin() + static_cast<std::ptrdiff_t>(layout.leaf_offset()), mu.end());
}

}  // namespace

CylinderFunction::CylinderFunction(int arity, int depth)
    : arity_(arity), depth_(depth), values_(TreeLayout(arity, depth).leaf_count(), 0.0) {}

CylinderFunction::CylinderFunction(int arity, int depth, std::vector<double> leaf_values)
    : arity_(arity), depth_(depth), values_(std::move(leaf_values)) {
  if (values_.size() != TreeLayout(arity, depth).leaf_count()) {
    throw InvalidArgument("expected m^depth leaf values");
  }
  for (double v : values_) check_value(v);
}

CylinderFunction CylinderFunction::constant(int arity, int depth, double c) {
  check_value(c);
  CylinderFunction f(arity, depth);
  std::fill(f.values_.begin(), f.values_.end(), c);
  return f;
}

CylinderFunction CylinderFunction::indicator(int arity, const Word& w, int depth) {
  if (w.depth() > static_cast<std::size_t>(depth)) {
    throw InvalidArgument("indicator depth must be at least the word length");
  }
  w.validate(arity);
  CylinderFunction f(arity, depth);
  const TreeLayout layout(arity, depth);
  std::size_t first = layout.index_of(w);
  std::size_t span = 1;
  for (std::size_t k = w.depth(); k < static_cast<std::size_t>(depth); ++k) {
    first *= static_cast<std::size_t>(arity);
    span *= static_cast<std::size_t>(arity);
  }
  std::fill_n(f.values_.begin() + static_cast<std::ptrdiff_t>(first), span, 1.0);
  return f;
}

CylinderFunction CylinderFunction::from_sparse(int arity, int depth,
                                               const std::map<Word, double>& values) {
  CylinderFunction f(arity, depth);
  const TreeLayout layout(arity, depth);
  for (const auto& [w, v] : values) {
    if (w.depth() != static_cast<std::size_t>(depth)) {
      throw InvalidArgument("word " + w.to_string() + " does not have length " +
                            std::to_string(depth));
    }
    check_value(v);
    f.values_[layout.index_of(w)] = v;
  }
  return f;
}

double CylinderFunction::value(const Word& leaf) const { return values_[leaf_index(leaf)]; }

Word CylinderFunction::leaf_word(std::size_t leaf_index) const {
  return TreeLayout(arity_, depth_).word_at(depth_, leaf_index);
}

std::size_t CylinderFunction::leaf_index(const Word& leaf) const {
  if (leaf.depth() != static_cast<std::size_t>(depth_)) {
    throw InvalidArgument("leaf word must have length equal to the function depth");
  }
  return TreeLayout(arity_, depth_).index_of(leaf);
}

double CylinderFunction::max_value() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

std::map<Word, double> CylinderFunction::to_sparse() const {
  std::map<Word, double> out;
  const TreeLayout layout(arity_, depth_);
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (values_[j] != 0.0) out.emplace(layout.word_at(depth_, j), values_[j]);
  }
  return out;
}

CylinderFunction CylinderFunction::scaled(double c) const {
  check_value(c);
  CylinderFunction out = *this;
  for (double& v : out.values_) v *= c;
  return out;
}

CylinderFunction CylinderFunction::plus(const CylinderFunction& other) const {
  if (other.arity_ != arity_) throw InvalidArgument("arity mismatch");
  const int d = std::max(depth_, other.depth_);
  CylinderFunction a = refined(d);
  const CylinderFunction b = other.refined(d);
  for (std::size_t j = 0; j < a.values_.size(); ++j) a.values_[j] += b.values_[j];
  return a;
}

CylinderFunction CylinderFunction::truncated_at(double cap) const {
  check_value(cap);
  CylinderFunction out = *this;
  for (double& v : out.values_) v = std::min(v, cap);
  return out;
}

CylinderFunction CylinderFunction::refined(int new_depth) const {
  if (new_depth < depth_) throw InvalidArgument("cannot refine to a shallower depth");
  std::size_t factor = 1;
  for (int k = depth_; k < new_depth; ++k) factor *= static_cast<std::size_t>(arity_);
  std::vector<double> out;
  out.reserve(values_.size() * factor);
  for (double v : values_) out.insert(out.end(), factor, v);
  return CylinderFunction(arity_, new_depth, std::move(out));
}

CellSet level_set(const CylinderFunction& f, double t) {
  std::vector<Word> cells;
  const TreeLayout layout(f.arity(), f.depth());
  for (std::size_t j = 0; j < f.leaf_count(); ++j) {
    if (f.value_at(j) > t) cells.push_back(layout.word_at(f.depth(), j));
  }
  return CellSet::from_antichain(std::move(cells), f.arity()).coarsened(f.arity());
}

CylinderFunction restrict_to(const CylinderFunction& f, const Word& w) {
  if (w.depth() > static_cast<std::size_t>(f.depth())) {
    throw InvalidArgument("restriction word deeper than the function");
  }
  const CylinderFunction mask = CylinderFunction::indicator(f.arity(), w, f.depth());
  std::vector<double> out(f.values().begin(), f.values().end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (mask.value_at(j) == 0.0) out[j] = 0.0;
  }
  return CylinderFunction(f.arity(), f.depth(), std::move(out));
}

CylinderFunction restrict_to(const CylinderFunction& f, const CellSet& cells) {
  if (cells.max_depth() > static_cast<std::size_t>(f.depth())) {
    throw InvalidArgument("restriction cells deeper than the function");
  }
  std::vector<double> out(f.leaf_count(), 0.0);
  for (const Word& w : cells.cells()) {
    const CylinderFunction part = restrict_to(f, w);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += part.value_at(j);
  }
  return CylinderFunction(f.arity(), f.depth(), std::move(out));
}

double mu_integral(const IteratedFunctionSystem& ifs, const CylinderFunction& f) {
  const std::vector<double> mu = leaf_measures(ifs, f);
  ExactSum total;
  for (std::size_t j = 0; j < mu.size(); ++j) total.add(mu[j] * f.value_at(j));
  return total.value();
}

double p_choquet_integral(const IteratedFunctionSystem& ifs, const CylinderFunction& f, double p,
                          ContentExponent rho) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("p must be positive and finite");
  if (ifs.arity() != f.arity()) throw InvalidArgument("function arity does not match the IFS");
  const std::vector<LevelContent> levels = superlevel_contents(ifs, f.depth(), f.values(), rho);
  // H({f > t}) is constant for t in [v_{k-1}, v_k) and equals H({f >= v_k}).
  ExactSum total;
  double previous = 0.0;
  for (const LevelContent& lc : levels) {
    const double step = std::pow(lc.level, p) - std::pow(previous, p);
    total.add(lc.content * step);
    previous = lc.level;
  }
  return total.value();
}

double choquet_norm(const IteratedFunctionSystem& ifs, const CylinderFunction& f, double p,
                    ContentExponent rho) {
  if (std::isinf(p)) return ess_sup_norm(ifs, f, rho);
  return std::pow(p_choquet_integral(ifs, f, p, rho), 1.0 / p);
}

double llogl_functional(const IteratedFunctionSystem& ifs, const CylinderFunction& f) {
  const std::vector<double> mu = leaf_measures(ifs, f);
  ExactSum total;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const double v = f.value_at(j);
    if (v > 1.0) total.add(mu[j] * v * std::log(v));
  }
  return total.value();
}

double ess_sup_norm(const IteratedFunctionSystem& ifs, const CylinderFunction& f,
                    ContentExponent /*rho*/) {
  const std::vector<double> mu = leaf_measures(ifs, f);
  double best = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (mu[j] > 0.0) best = std::max(best, f.value_at(j));
  }
  return best;
}

}  // namespace fml
