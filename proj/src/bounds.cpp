#include "bft/bounds.hpp"

#include <cstdio>
#include <sstream>

namespace bft {

namespace {

struct RealVerdict {
  double lhs;
  double rhs;
  bool holds;
};

// lhs <= rhs + tolerance; a double-precision failure is re-checked at 50
// digits before it is reported.
template <class Lhs, class Rhs>
RealVerdict certify_leq(const Lhs& lhs, const Rhs& rhs) {
  const double l = lhs.template operator()<double>();
  const double r = rhs.template operator()<double>();
  if (l <= r + kRealTolerance) return {l, r, true};
  const HighPrecision lh = lhs.template operator()<HighPrecision>();
  const HighPrecision rh = rhs.template operator()<HighPrecision>();
  return {l, r, lh <= rh + HighPrecision(kRealTolerance)};
}

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t word) {
  for (int b = 0; b < 8; ++b) {
    h ^= (word >> (8 * b)) & 0xFFu;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void require_computes(const BooleanFunction& f, const ParityDecisionTree& t) {
  if (auto x = find_disagreement(t, f)) throw NotComputed(*x);
}

InputsDigest digest(const BooleanFunction* f, const ParityDecisionTree& t) {
  InputsDigest d;
  d.tree_id = tree_id(t);
  d.depth = depth(t);
  if (f != nullptr) {
    d.function_id = function_id(*f);
    d.mu = mean_positive(*f);
    d.variance = variance(*f);
  }
  return d;
}

InequalityReport exact_report(std::string name, const Rational& lhs, const Rational& rhs, InputsDigest inputs) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs_exact = lhs;
  r.rhs_exact = rhs;
  r.lhs = to_double(lhs);
  r.rhs = to_double(rhs);
  r.slack = to_double(rhs - lhs);
  r.holds = lhs <= rhs;
  r.equality = lhs == rhs;
  r.inputs = std::move(inputs);
  return r;
}

InequalityReport real_report(std::string name, std::optional<Rational> lhs_exact, const RealVerdict& v,
                             InputsDigest inputs) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs_exact = std::move(lhs_exact);
  r.lhs = v.lhs;
  r.rhs = v.rhs;
  r.slack = v.rhs - v.lhs;
  r.holds = v.holds;
  r.inputs = std::move(inputs);
  return r;
}

// sum f^(i) against sqrt(c * d), where c is produced by `constant`.
template <class Constant>
InequalityReport level_one_check(std::string name, const BooleanFunction& f, const ParityDecisionTree& t,
                                 const Constant& constant) {
  require_computes(f, t);
  auto inputs = digest(&f, t);
  if (f.is_constant()) return exact_report(std::move(name), 0, 0, std::move(inputs));
  const Rational s = linear_sum(f);
  const Rational sigma2 = inputs.variance;
  const unsigned d = inputs.depth;
  const auto lhs = [&]<class Real>() { return real_of<Real>(s); };
  const auto rhs = [&]<class Real>() {
    using std::sqrt;
    return Real(sqrt(constant.template operator()<Real>(sigma2) * Real(d)));
  };
  return real_report(std::move(name), s, certify_leq(lhs, rhs), std::move(inputs));
}

}  // namespace

double binary_entropy(double t) { return binary_entropy<double>(t); }

NotComputed::NotComputed(std::uint64_t witness)
    : std::invalid_argument("tree does not compute the function; first disagreement at point " +
                            std::to_string(witness)),
      witness_(witness) {}

std::string InequalityReport::relation() const {
  const std::string l = lhs_exact ? format_rational(*lhs_exact) : format_real(lhs);
  const std::string r = rhs_exact ? format_rational(*rhs_exact) : format_real(rhs);
  return l + (holds ? " <= " : " > ") + r;
}

std::string InequalityReport::tsv_line() const {
  const std::string l = lhs_exact ? format_rational(*lhs_exact) : format_real(lhs);
  const std::string r = rhs_exact ? format_rational(*rhs_exact) : format_real(rhs);
  const std::string s = (lhs_exact && rhs_exact) ? format_rational(*rhs_exact - *lhs_exact) : format_real(slack);
  return name + "\t" + l + "\t" + r + "\t" + s + "\t" + (holds ? "true" : "false");
}

std::string InequalityReport::structured() const {
  std::ostringstream out;
  out << "name: " << name << "\n";
  out << "lhs: " << (lhs_exact ? format_rational(*lhs_exact) : format_real(lhs)) << "\n";
  out << "lhs_real: " << format_real(lhs) << "\n";
  out << "rhs_bound: " << (rhs_exact ? format_rational(*rhs_exact) : format_real(rhs)) << "\n";
  out << "rhs_real: " << format_real(rhs) << "\n";
  out << "slack: " << format_real(slack) << "\n";
  out << "holds: " << (holds ? "true" : "false") << "\n";
  out << "equality: " << (equality ? "true" : "false") << "\n";
  out << "function_id: " << inputs.function_id << "\n";
  out << "tree_id: " << inputs.tree_id << "\n";
  out << "depth: " << inputs.depth << "\n";
  out << "variance: " << format_rational(inputs.variance) << "\n";
  out << "mu: " << format_rational(inputs.mu) << "\n";
  return out.str();
}

std::vector<InequalityReport> EntropyReport::inequalities() const {
  auto make = [](std::string name, double lhs, double rhs, bool holds) {
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.holds = holds;
    return r;
  };
  return {
      make("entropy_upper", h_given_f, eq1_bound, upper_holds),
      make("data_processing", h_given_leaf, h_given_f, processing_holds),
      make("entropy_lower", eq3_bound, h_given_leaf, lower_holds),
  };
}

std::string EntropyReport::structured() const {
  std::ostringstream out;
  out << "mu: " << format_rational(mu) << "\n";
  out << "linear_sum: " << format_rational(linear_sum) << "\n";
  out << "second_moment: " << format_rational(second_moment) << "\n";
  out << "eq1_bound: " << format_real(eq1_bound) << "\n";
  out << "h_given_f: " << format_real(h_given_f) << "\n";
  out << "h_given_leaf: " << format_real(h_given_leaf) << "\n";
  out << "eq3_bound: " << format_real(eq3_bound) << "\n";
  out << "upper_holds: " << (upper_holds ? "true" : "false") << "\n";
  out << "processing_holds: " << (processing_holds ? "true" : "false") << "\n";
  out << "lower_holds: " << (lower_holds ? "true" : "false") << "\n";
  out << "holds: " << (holds() ? "true" : "false") << "\n";
  return out.str();
}

EntropyReport entropy_chain(const BooleanFunction& f, const ParityDecisionTree& t) {
  require_computes(f, t);
  if (f.is_constant()) {
    throw std::invalid_argument(
        "entropy chain needs a non-constant function; for constants use the theorem1 check, which "
        "reports 0 <= 0");
  }
  const unsigned n = f.arity();
  const auto leaves = leaf_summaries(t);

  EntropyReport r;
  r.n = n;
  r.mu = mean_positive(f);
  r.linear_sum = linear_sum(f);
  r.second_moment = moments(leaves).second_moment;

  const auto given_f = [&]<class Real>() { return conditional_entropy_given_value<Real>(r.mu, r.linear_sum, n); };
  const auto given_leaf = [&]<class Real>() { return conditional_entropy_given_leaf<Real>(leaves, n); };
  const auto upper = [&]<class Real>() { return entropy_upper_bound<Real>(r.mu, r.linear_sum, n); };
  const Rational lower_exact = entropy_lower_bound(r.second_moment, n);
  const auto lower = [&]<class Real>() { return real_of<Real>(lower_exact); };

  const auto up = certify_leq(given_f, upper);
  const auto dp = certify_leq(given_leaf, given_f);
  const auto lo = certify_leq(lower, given_leaf);
  r.h_given_f = up.lhs;
  r.eq1_bound = up.rhs;
  r.h_given_leaf = dp.lhs;
  r.eq3_bound = lo.lhs;
  r.upper_holds = up.holds;
  r.processing_holds = dp.holds;
  r.lower_holds = lo.holds;
  return r;
}

InequalityReport theorem1_check(const BooleanFunction& f, const ParityDecisionTree& t) {
  return level_one_check("theorem1", f, t, []<class Real>(const Rational& sigma2) {
    return 4 * ln2<Real>() * real_of<Real>(sigma2);
  });
}

InequalityReport theorem4_check(const BooleanFunction& f, const ParityDecisionTree& t) {
  return level_one_check("theorem4", f, t, []<class Real>(const Rational&) { return Real(2); });
}

InequalityReport lemma3_check(const BooleanFunction& f, const ParityDecisionTree& t) {
  require_computes(f, t);
  return exact_report("lemma3", linear_sum(f), first_abs_moment(t), digest(&f, t));
}

InequalityReport second_moment_check(std::string name, const ParityDecisionTree& t, const Rational& bound) {
  return exact_report(std::move(name), second_moment(t), bound, digest(nullptr, t));
}

InequalityReport lemma1_check(const ParityDecisionTree& t) {
  return second_moment_check("lemma1", t, Rational(2 * depth(t)));
}

InequalityReport prop1_check(const ParityDecisionTree& t) {
  return second_moment_check("prop1", t, Rational(depth(t)));
}

InequalityReport average_depth_check(const ParityDecisionTree& t) {
  const auto m = moments(t);
  return exact_report("average_depth", m.second_moment, 2 * m.average_depth, digest(nullptr, t));
}

unsigned depth_lower_bound(const Rational& linear_sum, const Rational& variance) {
  if (variance <= 0) throw std::invalid_argument("depth lower bound needs a non-constant function");
  if (linear_sum == 0) return 0;
  // s^2 / sigma^2 is rational and 4 ln2 is irrational, so the quotient is
  // never an integer and 50 digits settle the ceiling.
  using boost::multiprecision::ceil;
  const HighPrecision value = to_high_precision(linear_sum * linear_sum / variance) / (4 * ln2<HighPrecision>());
  return ceil(value).convert_to<unsigned>();
}

unsigned depth_lower_bound(const BooleanFunction& f) {
  if (f.is_constant()) throw std::invalid_argument("constant functions have no nontrivial depth lower bound");
  return depth_lower_bound(linear_sum(f), variance(f));
}

Rational recmaj_linear_sum(unsigned k) {
  if (k == 0) throw std::invalid_argument("recursive majority needs k >= 1");
  // MAJ3 is balanced, so the level-1 sum of MAJ3 o g is the product of sums.
  const Rational base = linear_sum(maj3());
  Rational s = base;
  for (unsigned j = 1; j < k; ++j) s = base * s;
  return s;
}

unsigned recmaj_depth_bound(unsigned k) { return depth_lower_bound(recmaj_linear_sum(k), Rational(1)); }

double gs_probe(const BooleanFunction& f, unsigned guard) {
  if (f.is_constant()) throw std::invalid_argument("gs_probe needs a non-constant function");
  const auto s = spectrum(f, guard);
  return to_double(s.linear_sum()) / std::sqrt(static_cast<double>(s.degree()));
}

GsSurvey gs_survey(unsigned n) {
  if (n < 1 || n > 4) throw std::invalid_argument("gs_survey enumerates arities 1..4 only");
  GsSurvey out;
  out.n = n;
  const std::uint64_t count = std::uint64_t{1} << (std::uint64_t{1} << n);
  for (std::uint64_t code = 0; code < count; ++code) {
    BooleanFunction f(n, {code});
    if (f.is_constant()) continue;
    ++out.functions;
    const double ratio = gs_probe(f);
    if (!out.argmax || ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.argmax = f;
    }
  }
  return out;
}

std::string function_id(const BooleanFunction& f) {
  if (f.arity() <= 6) {
    std::string table;
    for (std::uint64_t x = 0; x < f.size(); ++x) table.push_back(f.is_negative(x) ? '-' : '+');
    return "n=" + std::to_string(f.arity()) + ":" + table;
  }
  std::uint64_t h = 0xCBF29CE484222325ull;
  h = fnv1a(h, f.arity());
  for (auto w : f.words()) h = fnv1a(h, w);
  return "n=" + std::to_string(f.arity()) + "#" + hex64(h);
}

std::string tree_id(const ParityDecisionTree& t) {
  std::string expr = tree_expression(t);
  if (expr.size() <= 160) return expr;
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : expr) h = fnv1a(h, static_cast<unsigned char>(c));
  return "tree#" + hex64(h);
}

}  // namespace bft
