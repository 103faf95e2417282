#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fml/choquet.hpp"
#include "fml/content.hpp"
#include "fml/ifs.hpp"
#include "fml/random.hpp"
#include "fml/word.hpp"

namespace fml {

enum class ValueDistribution { uniform, dyadic_levels, heavy_tail };

ValueDistribution parse_distribution(std::string_view name);
std::string_view to_string(ValueDistribution d);

/// Random cylinder functions. dyadic_levels draws values 2^k (k in [-8, 8])
/// so that every value sits on a dyadic level boundary; heavy_tail draws
/// e^U with U uniform on [0, 12]; uniform draws from [0, 4). Each leaf is
/// nonzero with probability `sparsity`.
struct GeneratorConfig {
  int depth = 8;
  ValueDistribution distribution = ValueDistribution::uniform;
  double sparsity = 1.0;
  std::uint64_t seed = 1;
};

CylinderFunction generate_function(int arity, const GeneratorConfig& config);

/// The campaign mixture: dense, sparse, single-spike and scaled-indicator
/// functions drawn from the given value distribution.
CylinderFunction generate_trial_function(int arity, int depth, ValueDistribution distribution,
                                         std::uint64_t seed);

/// Up to max_cells random words of depth 1..max_depth, disjointified.
CellSet generate_cell_set(int arity, int max_depth, std::size_t max_cells, SplitMix64& rng);

enum class TheoremId {
  strong_type,
  weak_type,
  strong_pp,
  wiener,
  stein,
  norm_equivalence,
  lebesgue,
  pointwise_domination,
};

std::string_view to_string(TheoremId id);

struct VerificationRecord {
  TheoremId theorem = TheoremId::strong_type;
  std::string ifs_name;
  double rho = 1.0;
  double p = 1.0;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;
  double margin = 0.0;  // rhs - lhs
  // lhs divided by the bound without its constant (the empirical constant);
  // for the Wiener and Stein records lhs / rhs.
  double ratio = 0.0;
  double worst_ratio = 0.0;  // running max of ratio within (theorem, rho, p)
  bool asserted = true;      // false for estimation-only records
};

/// A record fails when it is asserted and rhs - lhs < -(tol * max(|lhs|,|rhs|) + 1e-12).
bool violates(const VerificationRecord& r, double relative_tolerance = 1e-9);

struct CampaignOptions {
  int trials = 500;
  int depth = 0;  // 0: default_depth(arity)
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  int grid_points = 20;
  std::optional<ValueDistribution> distribution;  // unset: cycle through all three
};

/// Largest n <= 8 with m^n <= 1024 (8 for binary trees, 5 for quaternary).
int default_depth(int arity);

/// 2^{p+2}/(p - rho) for rho < p < 1 and 2^{2p+1}/(p(1 - rho)) for p >= 1.
/// Requires rho < 1 and p > rho.
double strong_type_constant(double p, ContentExponent rho);
/// 2^{p+2} p/(p - 1), p > 1.
double strong_pp_constant(double p);

/// int f^p dmu as an exact leaf sum.
double mu_power_integral(const IteratedFunctionSystem& ifs, const CylinderFunction& f, double p);

std::vector<VerificationRecord> verify_strong_type(const IteratedFunctionSystem& ifs,
                                                   ContentExponent rho, double p,
                                                   const CampaignOptions& options);
std::vector<VerificationRecord> verify_weak_type(const IteratedFunctionSystem& ifs,
                                                 ContentExponent rho,
                                                 const CampaignOptions& options);
std::vector<VerificationRecord> verify_strong_pp(const IteratedFunctionSystem& ifs, double p,
                                                 const CampaignOptions& options);
std::vector<VerificationRecord> verify_wiener(const IteratedFunctionSystem& ifs,
                                              const CampaignOptions& options);
/// Estimation-only records of int f log+ f dmu against int Mf dmu.
std::vector<VerificationRecord> verify_stein(const IteratedFunctionSystem& ifs,
                                             const CampaignOptions& options);
/// p may be +infinity (essential supremum). Two records per trial: the lower
/// bound ||f|| <= ||Mf|| (constant 1) then the upper bound ||Mf|| <= C ||f||.
std::vector<VerificationRecord> verify_norm_equivalence(const IteratedFunctionSystem& ifs,
                                                        ContentExponent rho, double p,
                                                        const CampaignOptions& options);
/// Per trial: one lebesgue record (largest deviation at the finest level and
/// largest |trace end - f(leaf)|, both must be 0) and one pointwise_domination
/// record (max over leaves of f - Mf, must be <= 0).
std::vector<VerificationRecord> verify_lebesgue(const IteratedFunctionSystem& ifs,
                                                const CampaignOptions& options);

/// Supremum over the family of int f log+ f dmu / int Mf dmu, skipping f = 0.
/// Trial t uses seed derive_seed(family.seed, t). Reports only.
double estimate_stein_constant(const IteratedFunctionSystem& ifs, const GeneratorConfig& family,
                               int trials);

struct LebesgueTrace {
  Word leaf;
  std::vector<double> deviation;  // D_n(x), n = 0..depth
};

/// D_n(x) = (1/mu(K_n(x))) int_{K_n(x)} |f - f(x)| dmu for each sampled leaf.
std::vector<LebesgueTrace> lebesgue_differentiation_experiment(const IteratedFunctionSystem& ifs,
                                                               const CylinderFunction& f,
                                                               std::span<const Word> sample_leaves);

/// Geometric grid of n thresholds spanning the values of Mf.
std::vector<double> threshold_grid(const CylinderFunction& mf, int n);

/// Recomputes worst_ratio as the running max of ratio per (theorem, rho, p).
void finalize_records(std::vector<VerificationRecord>& records);

struct SuiteRequest {
  std::string suite = "all";  // all|strong|weak|pp|wiener|stein|equiv|lebesgue
  std::vector<double> rhos;   // empty: suite defaults
  std::vector<double> ps;     // empty: suite defaults
};

std::vector<VerificationRecord> run_suite(const IteratedFunctionSystem& ifs,
                                          const SuiteRequest& request,
                                          const CampaignOptions& options);

inline constexpr std::string_view kCsvHeader =
    "theorem_id,ifs,rho,p,seed,lhs,rhs,constant,margin,worst_ratio";

void write_csv(std::ostream& out, const std::vector<VerificationRecord>& records);

}  // namespace fml
