#pragma once

// Inequality checkers and lower-bound calculators for Boolean functions
// computed by parity decision trees.
//
// Real-valued comparisons run in double first. A comparison that does not
// hold within kRealTolerance is re-evaluated with 50-digit arithmetic before a
// violation is reported. Exact rational comparisons use no tolerance.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "bft/boolfn.hpp"
#include "bft/numeric.hpp"
#include "bft/pdt.hpp"

namespace bft {

inline constexpr double kRealTolerance = 1e-9;

template <class Real>
Real real_of(const Rational& q) {
  if constexpr (std::is_same_v<Real, HighPrecision>) {
    return to_high_precision(q);
  } else {
    return q.convert_to<Real>();
  }
}

template <class Real>
Real ln2() {
  using std::log;
  return log(Real(2));
}

/// h(t) = -t log2 t - (1-t) log2 (1-t), with h(0) = h(1) = 0.
template <class Real>
Real binary_entropy(const Real& t) {
  using std::log;
  if (t < 0 || t > 1) throw std::domain_error("binary_entropy argument outside [0, 1]");
  Real h = 0;
  const Real u = 1 - t;
  if (t > 0) h -= t * log(t);
  if (u > 0) h -= u * log(u);
  return h / ln2<Real>();
}

double binary_entropy(double t);

/// Thrown when a checker is handed a tree that does not compute the function.
class NotComputed : public std::invalid_argument {
 public:
  explicit NotComputed(std::uint64_t witness);
  std::uint64_t witness() const { return witness_; }

 private:
  std::uint64_t witness_;
};

struct InputsDigest {
  std::string function_id;
  std::string tree_id;
  unsigned depth = 0;
  Rational variance;
  Rational mu;
};

struct InequalityReport {
  std::string name;
  std::optional<Rational> lhs_exact;
  double lhs = 0;
  std::optional<Rational> rhs_exact;
  double rhs = 0;
  double slack = 0;
  bool holds = false;
  /// lhs == rhs exactly (exact comparisons only).
  bool equality = false;
  InputsDigest inputs;

  /// "name<TAB>lhs<TAB>rhs<TAB>slack<TAB>holds"
  std::string tsv_line() const;
  /// One "key: value" line per field.
  std::string structured() const;
  /// "3/2 <= 2.35482004503"
  std::string relation() const;
};

struct EntropyReport {
  unsigned n = 0;
  Rational mu;
  Rational linear_sum;
  Rational second_moment;
  double h_given_f = 0;
  double h_given_leaf = 0;
  double eq1_bound = 0;
  double eq3_bound = 0;
  bool upper_holds = false;      // eq1_bound >= h_given_f
  bool processing_holds = false; // h_given_f >= h_given_leaf
  bool lower_holds = false;      // h_given_leaf >= eq3_bound

  bool holds() const { return upper_holds && processing_holds && lower_holds; }
  std::vector<InequalityReport> inequalities() const;
  std::string structured() const;
};

/// H(X_i | f(X)) for uniform X and uniform i, in closed form.
template <class Real>
Real conditional_entropy_given_value(const Rational& mu, const Rational& linear_sum, unsigned n) {
  const Rational plus = Rational(1, 2) + linear_sum / (4 * mu * n);
  const Rational minus = Rational(1, 2) - linear_sum / (4 * (1 - mu) * n);
  return real_of<Real>(mu) * binary_entropy(real_of<Real>(plus)) +
         real_of<Real>(1 - mu) * binary_entropy(real_of<Real>(minus));
}

/// H(X_i | leaf_T(X)) = E_leaf h(1/2 + sum(l)/(2n)).
template <class Real>
Real conditional_entropy_given_leaf(const std::vector<LeafSummary>& leaves, unsigned n) {
  Real total = 0;
  for (const auto& leaf : leaves) {
    if (!leaf.live()) continue;
    const Rational t = Rational(1, 2) + Rational(leaf.coordinate_sum(), 2 * static_cast<int>(n));
    total += real_of<Real>(leaf.mass) * binary_entropy(real_of<Real>(t));
  }
  return total;
}

/// 1 - (sum f^(i))^2 / (8 ln2 mu (1-mu) n^2).
template <class Real>
Real entropy_upper_bound(const Rational& mu, const Rational& linear_sum, unsigned n) {
  const Rational ratio = linear_sum * linear_sum / (mu * (1 - mu) * n * n);
  return 1 - real_of<Real>(ratio) / (8 * ln2<Real>());
}

/// 1 - E[(sum l / n)^2]: the entropy lower bound 1 - t^2 <= h(1/2 + t/2)
/// applied leafwise with t = sum l / n.
inline Rational entropy_lower_bound(const Rational& second_moment, unsigned n) {
  return 1 - second_moment / (n * n);
}

EntropyReport entropy_chain(const BooleanFunction& f, const ParityDecisionTree& t);

/// sum f^(i) <= sqrt(4 ln2 sigma^2 d).
InequalityReport theorem1_check(const BooleanFunction& f, const ParityDecisionTree& t);
/// sum f^(i) <= sqrt(2 d).
InequalityReport theorem4_check(const BooleanFunction& f, const ParityDecisionTree& t);
/// sum f^(i) <= E|sum l_i|, equality flagged.
InequalityReport lemma3_check(const BooleanFunction& f, const ParityDecisionTree& t);

/// E(sum l_i)^2 <= bound, exact.
InequalityReport second_moment_check(std::string name, const ParityDecisionTree& t, const Rational& bound);
/// E(sum l_i)^2 <= 2d.
InequalityReport lemma1_check(const ParityDecisionTree& t);
/// E(sum l_i)^2 <= d; a theorem only for correlation-free trees.
InequalityReport prop1_check(const ParityDecisionTree& t);
/// E(sum l_i)^2 <= 2 * average depth.
InequalityReport average_depth_check(const ParityDecisionTree& t);

/// ceil(s^2 / (4 ln2 sigma^2)); zero when s = 0.
unsigned depth_lower_bound(const Rational& linear_sum, const Rational& variance);
/// Lower bound on the depth of any parity decision tree computing f.
/// Rejects constant f.
unsigned depth_lower_bound(const BooleanFunction& f);

/// (3/2)^k, built from the level-1 multiplicativity of composition with the
/// linear sum of MAJ3 taken from its truth table.
Rational recmaj_linear_sum(unsigned k);
/// Depth lower bound for MAJ3^k from recmaj_linear_sum (balanced, so sigma^2 = 1).
unsigned recmaj_depth_bound(unsigned k);

/// sum f^(i) / sqrt(deg f). Rejects constant f.
double gs_probe(const BooleanFunction& f, unsigned guard = kDefaultTransformGuard);

struct GsSurvey {
  unsigned n = 0;
  double max_ratio = 0;
  std::optional<BooleanFunction> argmax;
  std::uint64_t functions = 0;
};

/// Max of gs_probe over every non-constant function on n <= 4 variables.
GsSurvey gs_survey(unsigned n);

std::string function_id(const BooleanFunction& f);
std::string tree_id(const ParityDecisionTree& t);

}  // namespace bft
