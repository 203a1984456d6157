#pragma once

// Brute-force ground truth and the verification suites.
//
// Everything here recomputes quantities by direct enumeration over points,
// independently of the transform and GF(2) elimination paths it checks.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bft/boolfn.hpp"
#include "bft/numeric.hpp"
#include "bft/pdt.hpp"

namespace bft::oracle {

inline constexpr unsigned kBruteForceMaxArity = 12;
inline constexpr unsigned kEnumerationMaxArity = 4;
inline constexpr unsigned kSolverMaxArity = 4;

/// c(S) = sum_x f(x) chi_S(x) by the double loop over (S, x).
FourierSpectrum brute_force_spectrum(const BooleanFunction& f);

/// All 2^(2^n) functions in order of table code (bit b of the code = point b).
void for_each_function(unsigned n, const std::function<void(const BooleanFunction&)>& visit);
std::vector<BooleanFunction> enumerate_functions(unsigned n);

BooleanFunction random_function(unsigned n, Rng& rng);

/// Random tree of depth exactly `depth`. A spine path from the root reaches
/// full depth; every other internal position stops early with probability
/// 1/4. Masks are uniform nonempty subsets (singletons when `plain`), labels
/// uniform.
ParityDecisionTree random_pdt(unsigned n, unsigned depth, Rng& rng, bool plain = false);
ParityDecisionTree random_pdt(unsigned n, unsigned depth, std::uint64_t seed);

/// Every tree over arity n of depth at most max_depth, with every mask and
/// label choice.
std::vector<ParityDecisionTree> enumerate_trees(unsigned n, unsigned max_depth);

struct SolverResult {
  unsigned depth;
  ParityDecisionTree certificate;
};

/// Exact minimum parity decision tree depth (n <= 4), with an optimal tree.
SolverResult min_pdt_depth(const BooleanFunction& f);
/// Same recursion restricted to singleton queries: ordinary decision trees.
SolverResult min_dt_depth(const BooleanFunction& f);

/// H(X_i | f(X)) from the joint distribution of (X_i, f(X)), i uniform.
double definitional_entropy_given_value(const BooleanFunction& f);
/// H(X_i | leaf_T(X)) from the joint distribution of (X_i, leaf).
double definitional_entropy_given_leaf(const ParityDecisionTree& t);

struct LeafCensus {
  std::string leaf_id;
  std::uint64_t points = 0;
  /// sum over reaching points of x_i.
  std::vector<std::int64_t> coordinate_totals;
};

/// Points reaching each leaf, found by evaluating every input (n <= 20).
std::vector<LeafCensus> leaf_census(const ParityDecisionTree& t);

struct SuiteConfig {
  unsigned max_n_exhaustive = 3;
  unsigned max_depth_exhaustive = 2;
  std::uint64_t lemma1_trials = 100000;
  std::uint64_t random_trials = 10000;
  unsigned random_max_n = 8;
  unsigned random_max_depth = 5;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  /// The Lemma 1 check uses bound factor * depth. Anything below 2 is a
  /// deliberately corrupted run.
  unsigned lemma1_factor = 2;
  std::size_t max_counterexamples = 10000;
};

struct CheckTally {
  std::string name;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  /// Instances where an inequality held with equality.
  std::uint64_t equalities = 0;
  std::optional<double> worst_slack;
  /// Serialized inputs (truth table and/or tree text) of failures.
  std::vector<std::string> counterexamples;
};

struct SuiteReport {
  std::vector<CheckTally> checks;

  bool all_passed() const;
  const CheckTally* find(const std::string& name) const;
  /// One tab-separated line per check: name passed failed equalities worst_slack.
  std::string to_text() const;
};

SuiteReport run_suite(const SuiteConfig& cfg);

}  // namespace bft::oracle
