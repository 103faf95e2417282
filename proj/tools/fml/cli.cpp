#include "fml/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "fml/choquet.hpp"
#include "fml/config.hpp"
#include "fml/content.hpp"
#include "fml/errors.hpp"
#include "fml/geometry.hpp"
#include "fml/harness.hpp"
#include "fml/maximal.hpp"
#include "fml/selection.hpp"

namespace fml::cli {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& text, bool allow_inf) {
  if (allow_inf && (text == "inf" || text == "infinity")) return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw InvalidArgument("not a number: '" + text + "'");
  }
  return v;
}

std::vector<double> parse_reals(const std::vector<std::string>& texts, bool allow_inf) {
  std::vector<double> out;
  for (const std::string& t : texts) out.push_back(parse_real(t, allow_inf));
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << contents;
  if (!f) throw ConfigError("failed writing " + path);
}

int cmd_dim(const RunConfig& cfg, std::ostream& out) {
  const auto ifs = load_ifs_config(cfg.ifs_path);
  out << num(ifs.dimension()) << '\n';
  return kExitOk;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto ifs = load_ifs_config(cfg.ifs_path);
  if (!ifs.has_geometry()) throw ConfigError("config has no translations; nothing to draw");
  const AxisBox seed = AxisBox::unit(static_cast<std::size_t>(ifs.ambient_dimension()));
  if (ifs.ssc_declared() && !seed_images_disjoint(ifs, seed)) {
    err << "warning: first-generation images of the unit box overlap; separation is not confirmed\n";
  }
  const auto pieces = generation_geometry(ifs, cfg.depth, seed);
  if (!cfg.svg_path.empty()) write_file(cfg.svg_path, render_svg(pieces, seed));
  out << "word";
  for (int k = 0; k < ifs.ambient_dimension(); ++k) out << ",lower" << k << ",upper" << k;
  out << '\n';
  for (const auto& p : pieces) {
    out << p.word.to_string();
    for (std::size_t k = 0; k < p.vertices.front().size(); ++k) {
      double lo = p.vertices.front()[k];
      double hi = lo;
      for (const auto& v : p.vertices) {
        lo = std::min(lo, v[k]);
        hi = std::max(hi, v[k]);
      }
      out << ',' << num(lo) << ',' << num(hi);
    }
    out << '\n';
  }
  return kExitOk;
}

int cmd_content(const RunConfig& cfg, std::ostream& out) {
  const auto ifs = load_ifs_config(cfg.ifs_path);
  const CellSet e = disjointify(load_cells(cfg.cells_path, ifs.arity()), ifs.arity());
  const ContentExponent rho(cfg.rho);
  const ContentResult r = optimal_cover(ifs, e, rho);
  out << "content " << num(r.value) << '\n';
  out << "cover";
  for (const Word& w : r.cover.cells()) out << ' ' << w.to_string();
  out << '\n';
  if (cfg.brute_force) {
    out << "brute_force "
        << num(brute_force_content(ifs, e, rho, static_cast<int>(e.max_depth()))) << '\n';
  }
  return kExitOk;
}

int cmd_choquet(const RunConfig& cfg, std::ostream& out) {
  const auto ifs = load_ifs_config(cfg.ifs_path);
  const auto f = load_function(cfg.function_path, ifs.arity());
  const ContentExponent rho(cfg.rho);
  if (std::isinf(cfg.p)) {
    out << "ess_sup " << num(ess_sup_norm(ifs, f, rho)) << '\n';
    return kExitOk;
  }
  out << "integral " << num(p_choquet_integral(ifs, f, cfg.p, rho)) << '\n';
  out << "norm " << num(choquet_norm(ifs, f, cfg.p, rho)) << '\n';
  out << "mu_integral " << num(mu_integral(ifs, f)) << '\n';
  return kExitOk;
}

int cmd_maximal(const RunConfig& cfg, std::ostream& out) {
  const auto ifs = load_ifs_config(cfg.ifs_path);
  CylinderFunction mf(ifs.arity(), 0);
  std::optional<CylinderFunction> f;
  if (!cfg.function_path.empty()) f = load_function(cfg.function_path, ifs.arity());
  if (cfg.closed_form_word) {
    const Word w = Word::parse(*cfg.closed_form_word, ifs.arity());
    const int depth = cfg.depth > 0 ? cfg.depth : static_cast<int>(w.depth());
    mf = indicator_maximal_closed_form(ifs, w, depth);
    if (!f) f = CylinderFunction::indicator(ifs.arity(), w, depth);
  } else if (f) {
    mf = maximal_operator(ifs, *f);
  } else {
    throw InvalidArgument("maximal needs --fn or --closed-form-word");
  }
  if (cfg.trace_leaf) {
    const Word leaf = Word::parse(*cfg.trace_leaf, ifs.arity());
    const AncestorAverages tr = ancestor_average_trace(ifs, *f, leaf);
    out << "level,average\n";
    for (std::size_t k = 0; k < tr.averages.size(); ++k) out << k << ',' << num(tr.averages[k]) << '\n';
    return kExitOk;
  }
  out << "leaf,value\n";
  for (std::size_t j = 0; j < mf.leaf_count(); ++j) {
    out << mf.leaf_word(j).to_string() << ',' << num(mf.value_at(j)) << '\n';
  }
  return kExitOk;
}

int cmd_select(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto ifs = load_ifs_config(cfg.ifs_path);
  const ContentExponent rho(cfg.rho);
  std::vector<Word> cubes = load_cells(cfg.cells_path, ifs.arity());
  cubes = order_cubes(ifs, std::move(cubes), parse_selection_order(cfg.order));
  const SelectionResult res = select_subfamily(ifs, cubes, rho, cfg.sigma);

  std::size_t depth = 0;
  for (const Word& w : cubes) depth = std::max(depth, w.depth());
  const CylinderFunction f = cfg.function_path.empty()
                                 ? CylinderFunction::constant(ifs.arity(), static_cast<int>(depth), 1.0)
                                 : load_function(cfg.function_path, ifs.arity());
  const SelectionCertificate cert = certify_selection(ifs, res, rho, f);

  out << "selected";
  for (const Word& w : res.selected_words()) out << ' ' << w.to_string();
  out << '\n';
  out << "rejected";
  std::size_t next = 0;
  for (std::size_t i = 0; i < res.input.size(); ++i) {
    if (next < res.selected.size() && res.selected[next] == i) {
      ++next;
      continue;
    }
    out << ' ' << res.input[i].to_string();
  }
  out << '\n';
  out << "packing_margin " << num(cert.packing_margin) << " nodes " << cert.nodes_checked << '\n';
  out << "covering " << num(cert.covering_lhs) << " <= " << num(cert.covering_rhs) << '\n';
  out << "splitting " << num(cert.splitting_lhs) << " <= " << num(cert.splitting_rhs) << '\n';

  auto holds = [&](double lhs, double rhs) {
    return rhs - lhs >= -(cfg.tolerance * std::max(std::fabs(lhs), std::fabs(rhs)) + 1e-12);
  };
  bool ok = cert.packing_holds;
  ok = ok && holds(cert.covering_lhs, cert.covering_rhs);
  ok = ok && holds(cert.splitting_lhs, cert.splitting_rhs);
  if (!ok) {
    err << "selection certificate failed\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto ifs = load_ifs_config(cfg.ifs_path);
  CampaignOptions opts;
  opts.trials = cfg.trials;
  opts.depth = cfg.depth;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  opts.grid_points = cfg.grid_points;
  if (cfg.distribution) opts.distribution = parse_distribution(*cfg.distribution);
  const SuiteRequest req{cfg.suite, cfg.rhos, cfg.ps};
  const auto records = run_suite(ifs, req, opts);

  if (cfg.csv_path.empty()) {
    write_csv(out, records);
  } else {
    std::ostringstream csv;
    write_csv(csv, records);
    write_file(cfg.csv_path, csv.str());
  }

  struct Tally {
    std::size_t rows = 0;
    std::size_t failures = 0;
    double worst = 0.0;
    bool asserted = true;
  };
  std::map<std::string, Tally> tally;
  std::size_t failures = 0;
  for (const auto& r : records) {
    Tally& t = tally[std::string(to_string(r.theorem))];
    ++t.rows;
    t.worst = std::max(t.worst, r.worst_ratio);
    t.asserted = r.asserted;
    if (violates(r, cfg.tolerance)) {
      ++t.failures;
      ++failures;
    }
  }
  for (const auto& [name, t] : tally) {
    err << name << ": " << t.rows << " rows, " << (t.asserted ? std::to_string(t.failures) + " violations" : "reported only")
        << ", worst ratio " << num(t.worst) << '\n';
  }
  return failures == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::vector<std::string> rho_list;
  std::vector<std::string> p_list;
  std::string p_text = "1";

  CLI::App app{"Maximal inequalities on self-similar sets: contents, Choquet integrals, "
               "dyadic maximal functions and inequality verification campaigns."};
  app.name("fml");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print help for every subcommand");

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", cfg.ifs_path, "IFS configuration file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
  };

  CLI::App* dim = app.add_subcommand("dim", "Print the similarity dimension of an IFS");
  add_config(dim);

  CLI::App* gen = app.add_subcommand("generate", "List generation-n pieces and optionally draw them");
  add_config(gen);
  gen->add_option("--depth", cfg.depth, "Generation n (m^n pieces)")->default_val(3)->check(CLI::Range(0, 20));
  gen->add_option("--svg", cfg.svg_path, "Write an SVG drawing to this path");

  CLI::App* content = app.add_subcommand("content", "Hausdorff content of a cell union");
  add_config(content);
  content->add_option("--cells", cfg.cells_path, "File with one word per line")->required()->check(CLI::ExistingFile);
  content->add_option("--rho", cfg.rho, "Content exponent in (0,1]")->default_val(1.0);
  content->add_flag("--brute-force", cfg.brute_force, "Also enumerate every cover (small inputs only)");

  CLI::App* choquet = app.add_subcommand("choquet", "p-Choquet integral of a cylinder function");
  add_config(choquet);
  choquet->add_option("--fn", cfg.function_path, "Function file {\"depth\":n,\"values\":{word:v}}")
      ->required()
      ->check(CLI::ExistingFile);
  choquet->add_option("--p", p_text, "Exponent p > 0, or inf for the essential supremum")->default_val("1");
  choquet->add_option("--rho", cfg.rho, "Content exponent in (0,1]")->default_val(1.0);

  CLI::App* maximal = app.add_subcommand("maximal", "Dyadic maximal function as a leaf,value CSV");
  add_config(maximal);
  maximal->add_option("--fn", cfg.function_path, "Function file")->check(CLI::ExistingFile);
  maximal->add_option("--closed-form-word", cfg.closed_form_word,
                      "Build M of the indicator of this cube directly instead of --fn");
  maximal->add_option("--depth", cfg.depth, "Leaf depth for --closed-form-word (default: word length)")
      ->check(CLI::NonNegativeNumber);
  maximal->add_option("--trace-leaf", cfg.trace_leaf, "Print the ancestor averages at this leaf instead");

  CLI::App* select = app.add_subcommand("select", "Greedy packing selection from a cube family");
  add_config(select);
  select->add_option("--cells", cfg.cells_path, "File with one word per line (an antichain)")
      ->required()
      ->check(CLI::ExistingFile);
  select->add_option("--rho", cfg.rho, "Content exponent in (0,1]")->default_val(1.0);
  select->add_option("--sigma", cfg.sigma, "Packing slack: threshold (1+sigma) mu(I)^rho")->default_val(1.0);
  select->add_option("--order", cfg.order, "Scan order")->default_val("input")->check(CLI::IsMember({"input", "lex", "measure"}));
  select->add_option("--fn", cfg.function_path, "Function for the splitting check (default: 1)")
      ->check(CLI::ExistingFile);
  select->add_option("--tolerance", cfg.tolerance, "Relative tolerance for the certificate")->default_val(1e-9);

  CLI::App* verify = app.add_subcommand("verify", "Run randomized inequality campaigns and emit CSV");
  add_config(verify);
  verify->add_option("--suite", cfg.suite, "Which inequalities to check")
      ->default_val("all")
      ->check(CLI::IsMember({"all", "strong", "weak", "pp", "wiener", "stein", "equiv", "lebesgue"}));
  verify->add_option("--trials", cfg.trials, "Random functions per parameter point")->default_val(500)->check(CLI::PositiveNumber);
  verify->add_option("--depth", cfg.depth, "Function depth (0: largest n <= 8 with m^n <= 1024)")
      ->default_val(0)
      ->check(CLI::Range(0, 10));
  verify->add_option("--seed", cfg.seed, "Base seed; trial i uses a seed derived from it")->default_val(1);
  verify->add_option("--rho", rho_list, "Content exponents (repeatable; default: suite grid)");
  verify->add_option("--p", p_list, "Exponents p, inf allowed for equiv (repeatable; default: suite grid)");
  verify->add_option("--distribution", cfg.distribution, "Value distribution (default: cycle all; heavy-tail for wiener/stein)")
      ->check(CLI::IsMember({"uniform", "dyadic-levels", "heavy-tail"}));
  verify->add_option("--grid-points", cfg.grid_points, "Thresholds per weak-type trial")->default_val(20)->check(CLI::PositiveNumber);
  verify->add_option("--threads", cfg.threads, "Worker threads (0: FML_THREADS or all cores)")->default_val(0);
  verify->add_option("--csv", cfg.csv_path, "Write the CSV here instead of stdout");
  verify->add_option("--tolerance", cfg.tolerance, "Relative tolerance for a violation")->default_val(1e-9);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.rhos = parse_reals(rho_list, false);
    cfg.ps = parse_reals(p_list, true);
    cfg.p = parse_real(p_text, true);
    if (cfg.subcommand == "dim") return cmd_dim(cfg, out);
    if (cfg.subcommand == "generate") return cmd_generate(cfg, out, err);
    if (cfg.subcommand == "content") return cmd_content(cfg, out);
    if (cfg.subcommand == "choquet") return cmd_choquet(cfg, out);
    if (cfg.subcommand == "maximal") return cmd_maximal(cfg, out);
    if (cfg.subcommand == "select") return cmd_select(cfg, out, err);
    return cmd_verify(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace fml::cli
