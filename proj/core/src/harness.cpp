#include "fml/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

#include "fml/errors.hpp"
#include "fml/exact_sum.hpp"
#include "fml/maximal.hpp"
#include "fml/tree_layout.hpp"

namespace fml {

namespace {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FML_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) on a small pool; results keep index order.
template <typename Fn>
auto parallel_map(std::size_t n, unsigned threads, Fn fn) {
  using Result = decltype(fn(std::size_t{0}));
  std::vector<Result> results(n);
  const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          results[i] = fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

double draw_value(ValueDistribution d, SplitMix64& rng) {
  switch (d) {
    case ValueDistribution::uniform:
      return rng.uniform(0.0, 4.0);
    case ValueDistribution::dyadic_levels:
      return std::ldexp(1.0, static_cast<int>(rng.below(17)) - 8);
    case ValueDistribution::heavy_tail:
      return std::exp(rng.uniform(0.0, 12.0));
  }
  return 0.0;
}

int campaign_depth(const IteratedFunctionSystem& ifs, const CampaignOptions& options) {
  return options.depth > 0 ? options.depth : default_depth(ifs.arity());
}

ValueDistribution trial_distribution(const CampaignOptions& options, std::size_t trial) {
  if (options.distribution) return *options.distribution;
  static constexpr ValueDistribution cycle[] = {ValueDistribution::uniform,
                                                ValueDistribution::dyadic_levels,
                                                ValueDistribution::heavy_tail};
  return cycle[trial % 3];
}

struct Trial {
  std::uint64_t seed;
  CylinderFunction f;
};

Trial make_trial(const IteratedFunctionSystem& ifs, const CampaignOptions& options,
                 std::size_t index) {
  const std::uint64_t seed = derive_seed(options.seed, index);
  return Trial{seed, generate_trial_function(ifs.arity(), campaign_depth(ifs, options),
                                             trial_distribution(options, index), seed)};
}

VerificationRecord make_record(TheoremId id, const IteratedFunctionSystem& ifs, double rho,
                               double p, std::uint64_t seed, double lhs, double rhs,
                               double constant, double ratio) {
  VerificationRecord r;
  r.theorem = id;
  r.ifs_name = ifs.name();
  r.rho = rho;
  r.p = p;
  r.seed = seed;
  r.lhs = lhs;
  r.rhs = rhs;
  r.constant = constant;
  r.margin = rhs - lhs;
  r.ratio = ratio;
  return r;
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

template <typename Fn>
std::vector<VerificationRecord> run_trials(const IteratedFunctionSystem& ifs,
                                           const CampaignOptions& options, Fn per_trial) {
  if (options.trials < 1) throw InvalidArgument("trials must be at least 1");
  auto nested = parallel_map(static_cast<std::size_t>(options.trials), options.threads,
                             [&](std::size_t i) { return per_trial(make_trial(ifs, options, i)); });
  std::vector<VerificationRecord> out;
  for (auto& batch : nested) {
    for (auto& r : batch) out.push_back(std::move(r));
  }
  finalize_records(out);
  return out;
}

}  // namespace

ValueDistribution parse_distribution(std::string_view name) {
  if (name == "uniform") return ValueDistribution::uniform;
  if (name == "dyadic-levels" || name == "dyadic") return ValueDistribution::dyadic_levels;
  if (name == "heavy-tail" || name == "heavy") return ValueDistribution::heavy_tail;
  throw InvalidArgument("unknown value distribution '" + std::string(name) + "'");
}

std::string_view to_string(ValueDistribution d) {
  switch (d) {
    case ValueDistribution::uniform:
      return "uniform";
    case ValueDistribution::dyadic_levels:
      return "dyadic-levels";
    case ValueDistribution::heavy_tail:
      return "heavy-tail";
  }
  return "?";
}

CylinderFunction generate_function(int arity, const GeneratorConfig& config) {
  if (config.depth < 0 || config.depth > 10) throw InvalidArgument("generator depth must be in [0,10]");
  if (!(config.sparsity > 0.0 && config.sparsity <= 1.0)) {
    throw InvalidArgument("sparsity must lie in (0,1]");
  }
  SplitMix64 rng(config.seed);
  CylinderFunction shape(arity, config.depth);
  std::vector<double> values(shape.leaf_count(), 0.0);
  for (double& v : values) {
    if (rng.uniform() < config.sparsity) v = draw_value(config.distribution, rng);
  }
  return CylinderFunction(arity, config.depth, std::move(values));
}

CylinderFunction generate_trial_function(int arity, int depth, ValueDistribution distribution,
                                         std::uint64_t seed) {
  SplitMix64 rng(seed);
  const std::uint64_t kind = rng.below(5);
  GeneratorConfig config{depth, distribution, 1.0, rng.next()};
  switch (kind) {
    case 0:
      return generate_function(arity, config);
    case 1:
      config.sparsity = 0.25;
      return generate_function(arity, config);
    case 2:
      config.sparsity = 0.05;
      return generate_function(arity, config);
    case 3: {
      CylinderFunction f(arity, depth);
      std::vector<double> values(f.leaf_count(), 0.0);
      values[rng.below(values.size())] = draw_value(distribution, rng);
      return CylinderFunction(arity, depth, std::move(values));
    }
    default: {
      const int len = static_cast<int>(rng.below(static_cast<std::uint64_t>(depth) + 1));
      std::vector<Word::Symbol> symbols(static_cast<std::size_t>(len));
      for (auto& s : symbols) s = static_cast<Word::Symbol>(rng.below(static_cast<std::uint64_t>(arity)));
      return CylinderFunction::indicator(arity, Word(std::move(symbols)), depth)
          .scaled(draw_value(distribution, rng));
    }
  }
}

CellSet generate_cell_set(int arity, int max_depth, std::size_t max_cells, SplitMix64& rng) {
  const std::size_t count = 1 + rng.below(max_cells);
  std::vector<Word> words;
  words.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_depth)));
    std::vector<Word::Symbol> symbols(static_cast<std::size_t>(len));
    for (auto& s : symbols) s = static_cast<Word::Symbol>(rng.below(static_cast<std::uint64_t>(arity)));
    words.emplace_back(std::move(symbols));
  }
  return disjointify(words, arity);
}

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::strong_type:
      return "strong_type";
    case TheoremId::weak_type:
      return "weak_type";
    case TheoremId::strong_pp:
      return "strong_pp";
    case TheoremId::wiener:
      return "wiener";
    case TheoremId::stein:
      return "stein";
    case TheoremId::norm_equivalence:
      return "norm_equivalence";
    case TheoremId::lebesgue:
      return "lebesgue";
    case TheoremId::pointwise_domination:
      return "pointwise_domination";
  }
  return "?";
}

bool violates(const VerificationRecord& r, double relative_tolerance) {
  if (!r.asserted) return false;
  const double slack = relative_tolerance * std::max(std::fabs(r.lhs), std::fabs(r.rhs)) + 1e-12;
  return !(r.margin >= -slack);
}

int default_depth(int arity) {
  int n = 0;
  std::size_t leaves = 1;
  while (n < 8 && leaves * static_cast<std::size_t>(arity) <= 1024) {
    leaves *= static_cast<std::size_t>(arity);
    ++n;
  }
  return n;
}

double strong_type_constant(double p, ContentExponent rho) {
  const double r = rho.value();
  if (!(r < 1.0)) {
    throw InvalidArgument(
        "the content strong-type bound needs rho < 1; for rho = 1 and p > 1 use the "
        "measure strong-type (pp) bound 2^{p+2} p/(p-1)");
  }
  if (!(p > r) || !std::isfinite(p)) throw InvalidArgument("strong-type bound needs rho < p < inf");
  if (p < 1.0) return std::pow(2.0, p + 2.0) / (p - r);
  return std::pow(2.0, 2.0 * p + 1.0) / (p * (1.0 - r));
}

double strong_pp_constant(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("measure strong-type bound needs p > 1");
  return std::pow(2.0, p + 2.0) * p / (p - 1.0);
}

double mu_power_integral(const IteratedFunctionSystem& ifs, const CylinderFunction& f, double p) {
  const TreeLayout layout(f.arity(), f.depth());
  const std::vector<double> mu = node_measures(ifs, layout);
  ExactSum total;
  for (std::size_t j = 0; j < f.leaf_count(); ++j) {
    const double v = f.value_at(j);
    if (v > 0.0) total.add(mu[layout.leaf_offset() + j] * std::pow(v, p));
  }
  return total.value();
}

std::vector<VerificationRecord> verify_strong_type(const IteratedFunctionSystem& ifs,
                                                   ContentExponent rho, double p,
                                                   const CampaignOptions& options) {
  const double c = strong_type_constant(p, rho);
  return run_trials(ifs, options, [&](const Trial& t) {
    const CylinderFunction mf = maximal_operator(ifs, t.f);
    const double lhs = p_choquet_integral(ifs, mf, p, rho);
    const double base = p_choquet_integral(ifs, t.f, p, rho);
    return std::vector<VerificationRecord>{make_record(TheoremId::strong_type, ifs, rho.value(), p,
                                                       t.seed, lhs, c * base, c,
                                                       safe_ratio(lhs, base))};
  });
}

std::vector<double> threshold_grid(const CylinderFunction& mf, int n) {
  if (n < 1) throw InvalidArgument("threshold grid needs at least one point");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double v : mf.values()) {
    if (v > 0.0) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi == 0.0) {
    lo = 1.0;
    hi = 1.0;
  }
  const double start = 0.5 * lo;
  const double stop = 1.1 * hi;
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double frac = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
    grid[static_cast<std::size_t>(i)] = start * std::pow(stop / start, frac);
  }
  return grid;
}

std::vector<VerificationRecord> verify_weak_type(const IteratedFunctionSystem& ifs,
                                                 ContentExponent rho,
                                                 const CampaignOptions& options) {
  const double c = weak_type_constant(rho);
  return run_trials(ifs, options, [&](const Trial& t) {
    const CylinderFunction mf = maximal_operator(ifs, t.f);
    const std::vector<double> grid = threshold_grid(mf, options.grid_points);
    std::vector<VerificationRecord> out;
    for (const WeakTypePoint& pt : weak_type_profile(ifs, t.f, rho, grid)) {
      const double base = pt.bound / c;
      out.push_back(make_record(TheoremId::weak_type, ifs, rho.value(), rho.value(), t.seed,
                                pt.content, pt.bound, c, safe_ratio(pt.content, base)));
    }
    return out;
  });
}

std::vector<VerificationRecord> verify_strong_pp(const IteratedFunctionSystem& ifs, double p,
                                                 const CampaignOptions& options) {
  const double c = strong_pp_constant(p);
  return run_trials(ifs, options, [&](const Trial& t) {
    const CylinderFunction mf = maximal_operator(ifs, t.f);
    const double lhs = mu_power_integral(ifs, mf, p);
    const double base = mu_power_integral(ifs, t.f, p);
    return std::vector<VerificationRecord>{make_record(TheoremId::strong_pp, ifs, 1.0, p, t.seed,
                                                       lhs, c * base, c, safe_ratio(lhs, base))};
  });
}

std::vector<VerificationRecord> verify_wiener(const IteratedFunctionSystem& ifs,
                                              const CampaignOptions& options) {
  return run_trials(ifs, options, [&](const Trial& t) {
    const double lhs = mu_integral(ifs, maximal_operator(ifs, t.f));
    const double rhs = 2.0 + 8.0 * llogl_functional(ifs, t.f);
    return std::vector<VerificationRecord>{
        make_record(TheoremId::wiener, ifs, 1.0, 1.0, t.seed, lhs, rhs, 8.0, safe_ratio(lhs, rhs))};
  });
}

std::vector<VerificationRecord> verify_stein(const IteratedFunctionSystem& ifs,
                                             const CampaignOptions& options) {
  return run_trials(ifs, options, [&](const Trial& t) {
    const double num = llogl_functional(ifs, t.f);
    const double den = mu_integral(ifs, maximal_operator(ifs, t.f));
    VerificationRecord r =
        make_record(TheoremId::stein, ifs, 1.0, 1.0, t.seed, num, den, 0.0, safe_ratio(num, den));
    r.asserted = false;
    return std::vector<VerificationRecord>{r};
  });
}

std::vector<VerificationRecord> verify_norm_equivalence(const IteratedFunctionSystem& ifs,
                                                        ContentExponent rho, double p,
                                                        const CampaignOptions& options) {
  if (!(p > rho.value())) throw InvalidArgument("norm equivalence needs p > rho");
  double c = 1.0;
  if (!std::isinf(p)) {
    c = rho.value() < 1.0 ? std::pow(strong_type_constant(p, rho), 1.0 / p)
                          : std::pow(strong_pp_constant(p), 1.0 / p);
  }
  return run_trials(ifs, options, [&](const Trial& t) {
    const CylinderFunction mf = maximal_operator(ifs, t.f);
    const double nf = choquet_norm(ifs, t.f, p, rho);
    const double nmf = choquet_norm(ifs, mf, p, rho);
    return std::vector<VerificationRecord>{
        make_record(TheoremId::norm_equivalence, ifs, rho.value(), p, t.seed, nf, nmf, 1.0,
                    safe_ratio(nf, nmf)),
        make_record(TheoremId::norm_equivalence, ifs, rho.value(), p, t.seed, nmf, c * nf, c,
                    safe_ratio(nmf, nf))};
  });
}

std::vector<LebesgueTrace> lebesgue_differentiation_experiment(const IteratedFunctionSystem& ifs,
                                                               const CylinderFunction& f,
                                                               std::span<const Word> sample_leaves) {
  if (f.depth() < 4) throw InvalidArgument("differentiation experiment needs depth >= 4");
  const TreeLayout layout(f.arity(), f.depth());
  const std::vector<double> mu = node_measures(ifs, layout);
  const std::size_t m = static_cast<std::size_t>(f.arity());
  std::vector<LebesgueTrace> out;
  for (const Word& leaf : sample_leaves) {
    const std::size_t x = f.leaf_index(leaf);
    const double fx = f.value_at(x);
    LebesgueTrace trace{leaf, std::vector<double>(static_cast<std::size_t>(f.depth()) + 1, 0.0)};
    std::size_t width = f.leaf_count();
    for (int n = 0; n <= f.depth(); ++n) {
      const std::size_t first = (x / width) * width;
      ExactSum dev;
      for (std::size_t j = first; j < first + width; ++j) {
        dev.add(mu[layout.leaf_offset() + j] * std::fabs(f.value_at(j) - fx));
      }
      const double mass = mu[layout.offset(n) + x / width];
      trace.deviation[static_cast<std::size_t>(n)] = mass > 0.0 ? dev.value() / mass : 0.0;
      width /= m;
    }
    out.push_back(std::move(trace));
  }
  return out;
}

std::vector<VerificationRecord> verify_lebesgue(const IteratedFunctionSystem& ifs,
                                                const CampaignOptions& options) {
  CampaignOptions opts = options;
  opts.depth = std::max(4, campaign_depth(ifs, options));
  return run_trials(ifs, opts, [&](const Trial& t) {
    SplitMix64 rng(t.seed ^ 0x5851f42d4c957f2dull);
    std::vector<Word> sample;
    for (int i = 0; i < 8; ++i) sample.push_back(t.f.leaf_word(rng.below(t.f.leaf_count())));
    double worst = 0.0;
    for (const LebesgueTrace& tr : lebesgue_differentiation_experiment(ifs, t.f, sample)) {
      worst = std::max(worst, tr.deviation.back());
      const AncestorAverages avg = ancestor_average_trace(ifs, t.f, tr.leaf);
      worst = std::max(worst, std::fabs(avg.averages.back() - t.f.value(tr.leaf)));
    }
    const CylinderFunction mf = maximal_operator(ifs, t.f);
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < t.f.leaf_count(); ++j) {
      excess = std::max(excess, t.f.value_at(j) - mf.value_at(j));
    }
    return std::vector<VerificationRecord>{
        make_record(TheoremId::lebesgue, ifs, 1.0, 1.0, t.seed, worst, 0.0, 0.0, worst),
        make_record(TheoremId::pointwise_domination, ifs, 1.0, 1.0, t.seed, excess, 0.0, 1.0,
                    excess)};
  });
}

double estimate_stein_constant(const IteratedFunctionSystem& ifs, const GeneratorConfig& family,
                               int trials) {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  double best = 0.0;
  bool any = false;
  for (int t = 0; t < trials; ++t) {
    GeneratorConfig config = family;
    config.seed = derive_seed(family.seed, static_cast<std::uint64_t>(t));
    const CylinderFunction f = generate_function(ifs.arity(), config);
    const double den = mu_integral(ifs, maximal_operator(ifs, f));
    if (!(den > 0.0)) continue;
    any = true;
    best = std::max(best, llogl_functional(ifs, f) / den);
  }
  if (!any) throw InvalidArgument("every function in the family is zero");
  return best;
}

void finalize_records(std::vector<VerificationRecord>& records) {
  std::map<std::tuple<TheoremId, double, double>, double> worst;
  for (VerificationRecord& r : records) {
    auto [it, inserted] = worst.try_emplace({r.theorem, r.rho, r.p}, r.ratio);
    if (!inserted) it->second = std::max(it->second, r.ratio);
    r.worst_ratio = it->second;
  }
}

namespace {

std::vector<double> or_default(const std::vector<double>& given, std::vector<double> fallback) {
  return given.empty() ? fallback : given;
}

void append(std::vector<VerificationRecord>& out, std::vector<VerificationRecord> more) {
  for (auto& r : more) out.push_back(std::move(r));
}

}  // namespace

std::vector<VerificationRecord> run_suite(const IteratedFunctionSystem& ifs,
                                          const SuiteRequest& request,
                                          const CampaignOptions& options) {
  static const std::vector<std::string> known = {"all",    "strong", "weak",  "pp",
                                                 "wiener", "stein",  "equiv", "lebesgue"};
  if (std::find(known.begin(), known.end(), request.suite) == known.end()) {
    throw InvalidArgument("unknown suite '" + request.suite + "'");
  }
  const bool all = request.suite == "all";
  auto wants = [&](std::string_view s) { return all || request.suite == s; };
  std::vector<VerificationRecord> out;

  if (wants("strong")) {
    for (double r : or_default(request.rhos, {0.25, 0.5, 0.75})) {
      if (all && r >= 1.0) continue;
      const ContentExponent rho(r);
      std::vector<double> ps = request.ps;
      if (ps.empty()) {
        if (r + 0.1 < 0.9) ps.push_back(r + 0.1);
        ps.insert(ps.end(), {0.9, 1.0, 2.0, 3.0});
      }
      for (double p : ps) {
        if (all && !(p > r && std::isfinite(p))) continue;
        append(out, verify_strong_type(ifs, rho, p, options));
      }
    }
  }
  if (wants("weak")) {
    for (double r : or_default(request.rhos, {0.25, 0.5, 0.75, 1.0})) {
      append(out, verify_weak_type(ifs, ContentExponent(r), options));
    }
  }
  if (wants("pp")) {
    for (double p : or_default(request.ps, {1.5, 2.0, 3.0})) {
      if (all && !(p > 1.0 && std::isfinite(p))) continue;
      append(out, verify_strong_pp(ifs, p, options));
    }
  }
  if (wants("wiener")) {
    CampaignOptions opts = options;
    if (!opts.distribution) opts.distribution = ValueDistribution::heavy_tail;
    append(out, verify_wiener(ifs, opts));
  }
  if (wants("stein")) {
    CampaignOptions opts = options;
    if (!opts.distribution) opts.distribution = ValueDistribution::heavy_tail;
    append(out, verify_stein(ifs, opts));
  }
  if (wants("equiv")) {
    for (double r : or_default(request.rhos, {0.5, 1.0})) {
      std::vector<double> ps = request.ps;
      if (ps.empty()) {
        if (r < 0.75) ps.push_back(0.75);
        ps.insert(ps.end(), {2.0, std::numeric_limits<double>::infinity()});
      }
      for (double p : ps) {
        if (all && !(p > r)) continue;
        if (all && r == 1.0 && !(p > 1.0)) continue;
        append(out, verify_norm_equivalence(ifs, ContentExponent(r), p, options));
      }
    }
  }
  if (wants("lebesgue")) append(out, verify_lebesgue(ifs, options));
  return out;
}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<VerificationRecord>& records) {
  out << kCsvHeader << '\n';
  for (const VerificationRecord& r : records) {
    out << to_string(r.theorem) << ',' << csv_field(r.ifs_name) << ',' << format_number(r.rho)
        << ',' << format_number(r.p) << ',' << r.seed << ',' << format_number(r.lhs) << ','
        << format_number(r.rhs) << ',' << format_number(r.constant) << ','
        << format_number(r.margin) << ',' << format_number(r.worst_ratio) << '\n';
  }
}

}  // namespace fml
