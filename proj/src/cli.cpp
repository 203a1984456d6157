#include "bft/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bft/bounds.hpp"
#include "bft/oracle.hpp"

namespace bft::cli {

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned transform_guard() {
  if (const char* env = std::getenv("BFT_MAX_N")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > static_cast<long>(kMaxArity)) {
      throw UsageError("BFT_MAX_N must be an integer in [1, 27]");
    }
    return static_cast<unsigned>(v);
  }
  return kDefaultTransformGuard;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

BooleanFunction load_function(const std::string& source) {
  try {
    if (source.rfind("builtin:", 0) == 0) return builtin(std::string_view(source).substr(8));
    return parse_truth_table(read_file(source));
  } catch (const std::invalid_argument& e) {
    throw UsageError(source + ": " + e.what());
  }
}

ParityDecisionTree load_tree(const std::string& path) {
  try {
    return parse_tree(read_file(path));
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string subset_string(std::uint64_t mask) { return "{" + mask_string(mask) + "}"; }

std::string sign_char(int s) { return s > 0 ? "+" : "-"; }

void print_tree_stats(std::ostream& out, const ParityDecisionTree& t, bool with_leaves) {
  const auto leaves = leaf_summaries(t);
  const auto m = moments(leaves);
  const auto corr = find_correlation(t);
  out << "depth\t" << m.depth << "\n";
  out << "average_depth\t" << format_rational(m.average_depth) << "\n";
  out << "second_moment\t" << format_rational(m.second_moment) << "\n";
  out << "first_abs_moment\t" << format_rational(m.first_abs_moment) << "\n";
  out << "correlation_free\t" << (corr ? "false" : "true") << "\n";
  if (corr) {
    out << "correlation_witness\tleaf=" << (corr->leaf_id.empty() ? "(root)" : corr->leaf_id) << " pair={"
        << corr->pair.first + 1 << "," << corr->pair.second + 1 << "}\n";
  }
  if (!with_leaves) return;
  for (const auto& leaf : leaves) {
    out << "leaf\t" << (leaf.leaf_id.empty() ? "(root)" : leaf.leaf_id) << "\tlabel=" << sign_char(leaf.label)
        << "\tmass=" << format_rational(leaf.mass) << "\tlength=" << leaf.path_length << "\tvector=(";
    for (std::size_t i = 0; i < leaf.vector.size(); ++i) out << (i ? "," : "") << leaf.vector[i];
    out << ")\tforced={";
    bool first = true;
    for (const auto& [col, bit] : leaf.summary.forced) {
      out << (first ? "" : ",") << col + 1 << ":" << (bit ? "-" : "+");
      first = false;
    }
    out << "}\tcorrelated={";
    first = true;
    for (const auto& [i, j] : leaf.summary.correlated_pairs) {
      out << (first ? "" : ",") << "{" << i + 1 << "," << j + 1 << "}";
      first = false;
    }
    out << "}" << (leaf.live() ? "" : "\tdead") << "\n";
  }
}

int cmd_spectrum(std::ostream& out, const std::string& source, bool linear_only) {
  const auto f = load_function(source);
  out << "n=" << f.arity() << "\n";
  if (linear_only) {
    const auto c = linear_coefficients(f);
    for (unsigned i = 0; i < f.arity(); ++i) {
      if (c[i] != 0) out << "f^({" << i + 1 << "})\t" << format_rational(c[i]) << "\n";
    }
    out << "linear_sum\t" << format_rational(linear_sum(f)) << "\n";
    return kOk;
  }
  const unsigned guard = transform_guard();
  if (f.arity() > guard) {
    throw UsageError("arity " + std::to_string(f.arity()) + " exceeds the full-transform guard " +
                     std::to_string(guard) + "; rerun with --linear for the level-1 coefficients");
  }
  const auto s = spectrum(f, guard);
  for (std::uint64_t mask = 0; mask < s.coef.size(); ++mask) {
    if (s.coef[mask] != 0) out << "f^(" << subset_string(mask) << ")\t" << format_rational(s.coefficient(mask)) << "\n";
  }
  out << "linear_sum\t" << format_rational(s.linear_sum()) << "\n";
  out << "degree\t" << s.degree() << "\n";
  return kOk;
}

int cmd_pdt_stats(std::ostream& out, const std::string& path) {
  const auto t = load_tree(path);
  out << to_text(t);
  print_tree_stats(out, t, true);
  return kOk;
}

int cmd_refine(std::ostream& out, const std::string& path) {
  const auto t = load_tree(path);
  const auto r = refine_correlation_free(t);
  out << to_text(r);
  out << "# before\n";
  print_tree_stats(out, t, false);
  out << "# after\n";
  print_tree_stats(out, r, false);
  return kOk;
}

int cmd_check(std::ostream& out, std::ostream& err, const std::string& which, const std::string& fn_source,
              const std::string& tree_path, const std::string& report_path) {
  const auto f = load_function(fn_source);
  const auto t = load_tree(tree_path);
  if (f.arity() != t.arity()) throw UsageError("function and tree have different arity");
  if (const auto x = find_disagreement(t, f)) {
    err << "tree does not compute the function: point " << *x << " gives f=" << sign_char(f.evaluate(*x))
        << " but the tree outputs " << sign_char(eval(t, *x).label) << " (leaf "
        << (eval(t, *x).leaf_id.empty() ? "(root)" : eval(t, *x).leaf_id) << ")\n";
    return kViolation;
  }

  std::vector<InequalityReport> reports;
  std::string structured;
  if (which == "entropy") {
    if (f.is_constant()) throw UsageError("the entropy chain needs a non-constant function; use --which theorem1");
    const auto chain = entropy_chain(f, t);
    reports = chain.inequalities();
    structured = chain.structured();
  } else {
    if (which == "theorem1") {
      reports.push_back(theorem1_check(f, t));
    } else if (which == "theorem4") {
      reports.push_back(theorem4_check(f, t));
    } else if (which == "lemma1") {
      reports.push_back(lemma1_check(t));
    } else {
      reports.push_back(lemma3_check(f, t));
    }
    structured = reports.front().structured();
  }

  bool holds = true;
  for (const auto& r : reports) {
    out << r.tsv_line() << "\n";
    holds = holds && r.holds;
  }
  for (const auto& r : reports) {
    out << "# " << r.name << ": " << r.relation() << (r.equality ? " (equality)" : "") << "\n";
  }
  if (!report_path.empty()) {
    std::ofstream file(report_path);
    if (!file) throw UsageError("cannot write '" + report_path + "'");
    file << structured;
  }
  return holds ? kOk : kViolation;
}

int cmd_recmaj(std::ostream& out, unsigned k) {
  if (k < 1) throw UsageError("--k must be at least 1");
  const Rational s = recmaj_linear_sum(k);
  out << "k\t" << k << "\n";
  out << "arity\t3^" << k << "\n";
  out << "linear_sum\t" << format_rational(s) << "\n";
  out << "depth_lower_bound\t" << recmaj_depth_bound(k) << "\n";
  out << "bound_value\t" << format_real(to_double(s * s) / (4 * std::log(2.0))) << "\n";
  if (k <= 3) {
    const Rational streamed = linear_sum(recursive_majority(k));
    out << "streamed_linear_sum\t" << format_rational(streamed) << "\n";
    out << "streamed_matches\t" << (streamed == s ? "true" : "false") << "\n";
    return streamed == s ? kOk : kViolation;
  }
  return kOk;
}

int cmd_solve(std::ostream& out, const std::string& source) {
  const auto f = load_function(source);
  if (f.arity() > oracle::kSolverMaxArity) throw UsageError("the exact solver handles arity at most 4");
  const auto pdt = oracle::min_pdt_depth(f);
  const auto dt = oracle::min_dt_depth(f);
  out << "min_pdt_depth\t" << pdt.depth << "\n";
  out << "min_dt_depth\t" << dt.depth << "\n";
  if (!f.is_constant()) out << "depth_lower_bound\t" << depth_lower_bound(f) << "\n";
  out << "# certificate\n" << to_text(pdt.certificate);
  return kOk;
}

int cmd_verify(std::ostream& out, std::uint64_t seed, std::optional<std::uint64_t> trials) {
  oracle::SuiteConfig cfg;
  cfg.seed = seed;
  if (trials) {
    cfg.random_trials = *trials;
    cfg.lemma1_trials = 10 * *trials;
  }
  const auto report = oracle::run_suite(cfg);
  out << "check\tpassed\tfailed\tequalities\tworst_slack\n" << report.to_text();
  for (const auto& c : report.checks) {
    for (const auto& payload : c.counterexamples) out << "# counterexample " << c.name << "\n" << payload;
  }
  out << (report.all_passed() ? "all checks passed" : "FAILURES present") << "\n";
  return report.all_passed() ? kOk : kViolation;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier and parity decision tree analysis toolkit"};
  app.require_subcommand(1);

  std::string fn_source, tree_path, which, report_path;
  bool linear_only = false;
  unsigned k = 0;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> trials;

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Print the nonzero Fourier coefficients of a function");
  spectrum_cmd->add_option("function", fn_source, "truth-table file or builtin:<name>")->required();
  spectrum_cmd->add_flag("--linear", linear_only, "stream level-1 coefficients only (any arity)");

  auto* stats_cmd = app.add_subcommand("pdt-stats", "Depth, moments and per-leaf analysis of a tree");
  stats_cmd->add_option("tree", tree_path, "tree file")->required();

  auto* refine_cmd = app.add_subcommand("refine", "Refine a tree into a correlation-free tree");
  refine_cmd->add_option("tree", tree_path, "tree file")->required();

  auto* check_cmd = app.add_subcommand("check", "Check one inequality for a (function, tree) pair");
  check_cmd->add_option("--which", which, "inequality to check")
      ->required()
      ->check(CLI::IsMember({"theorem1", "theorem4", "lemma1", "lemma3", "entropy"}));
  check_cmd->add_option("--report", report_path, "write a structured report file");
  check_cmd->add_option("function", fn_source, "truth-table file or builtin:<name>")->required();
  check_cmd->add_option("tree", tree_path, "tree file")->required();

  auto* recmaj_cmd = app.add_subcommand("recmaj", "Level-1 sum and depth lower bound for recursive majority");
  recmaj_cmd->add_option("--k", k, "recursion depth")->required();

  auto* solve_cmd = app.add_subcommand("solve", "Exact minimum parity decision tree depth (n <= 4)");
  solve_cmd->add_option("function", fn_source, "truth-table file or builtin:<name>")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Run the verification suites");
  verify_cmd->add_option("--seed", seed, "suite seed");
  verify_cmd->add_option("--trials", trials, "random pairs per suite (second-moment suite runs 10x)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*spectrum_cmd) return cmd_spectrum(out, fn_source, linear_only);
    if (*stats_cmd) return cmd_pdt_stats(out, tree_path);
    if (*refine_cmd) return cmd_refine(out, tree_path);
    if (*check_cmd) return cmd_check(out, err, which, fn_source, tree_path, report_path);
    if (*recmaj_cmd) return cmd_recmaj(out, k);
    if (*solve_cmd) return cmd_solve(out, fn_source);
    if (*verify_cmd) return cmd_verify(out, seed, trials);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> storage{"bft"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace bft::cli
