// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "bft/bounds.hpp"
#include "bft/oracle.hpp"

using namespace bft;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int number, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!r.ok) ++failures;
  std::printf("[%s] %2d. %s (%s; %.2fs)\n", r.ok ? "PASS" : "FAIL", number, title, r.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string str(const Rational& q) { return format_rational(q); }

// sum_x f(x) x_k / 2^n, straight from the definition.
Rational direct_linear(const BooleanFunction& f, unsigned k) {
  std::int64_t total = 0;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const int fx = f.is_negative(x) ? -1 : 1;
    const int xk = (x >> k) & 1 ? -1 : 1;
    total += fx * xk;
  }
  return Rational(total, static_cast<std::int64_t>(f.size()));
}

// Leaf vectors recomputed independently of the elimination: a coordinate
// is forced at a leaf iff it is constant over the points reaching it.
struct LeafOracle {
  Rational mass;
  std::vector<int> vector;
};

std::map<std::string, LeafOracle> census_leaves(const ParityDecisionTree& t) {
  std::map<std::string, LeafOracle> out;
  const unsigned n = t.arity();
  for (const auto& c : oracle::leaf_census(t)) {
    LeafOracle l;
    l.mass = Rational(c.points, std::uint64_t{1} << n);
    l.vector.resize(n);
    for (unsigned i = 0; i < n; ++i) {
      const auto total = c.coordinate_totals[i];
      l.vector[i] = total == static_cast<std::int64_t>(c.points) ? 1 : total == -static_cast<std::int64_t>(c.points) ? -1 : 0;
    }
    out.emplace(c.leaf_id, l);
  }
  return out;
}

Rational oracle_second_moment(const ParityDecisionTree& t) {
  Rational m = 0;
  for (const auto& [id, l] : census_leaves(t)) {
    int s = 0;
    for (int v : l.vector) s += v;
    m += l.mass * (s * s);
  }
  return m;
}

std::vector<ParityDecisionTree> exhaustive_trees() {
  std::vector<ParityDecisionTree> all;
  for (unsigned n = 1; n <= 3; ++n) {
    auto trees = oracle::enumerate_trees(n, 2);
    all.insert(all.end(), trees.begin(), trees.end());
  }
  return all;
}

ParityDecisionTree random_tree(Rng& rng, unsigned max_n, unsigned max_depth, bool plain = false) {
  const auto n = static_cast<unsigned>(rng.between(1, max_n));
  const auto d = static_cast<unsigned>(rng.between(0, max_depth));
  return oracle::random_pdt(n, d, rng, plain);
}

}  // namespace

int main() {
  const ParityDecisionTree maj3_tree = parse_tree("n=3\n(Q 1,2 (Q 1 + -) (Q 3 + -))");

  criterion(1, "MAJ3 spectrum", [] {
    const auto s = spectrum(maj3());
    Outcome o;
    for (Mask m = 0; m < 8; ++m) {
      const Rational want = std::popcount(m) == 1 ? Rational(1, 2) : m == 7 ? Rational(-1, 2) : Rational(0);
      if (s.coefficient(m) != want) o.ok = false;
    }
    o.detail = "f^(i)=" + str(s.coefficient(1)) + ", f^({1,2,3})=" + str(s.coefficient(7));
    return o;
  });

  criterion(2, "recursive majority level-1 sums 3/2, 9/4, 27/8", [] {
    Outcome o;
    const Rational want[] = {Rational(3, 2), Rational(9, 4), Rational(27, 8)};
    for (unsigned k = 1; k <= 3; ++k) {
      const Rational streamed = linear_sum(recursive_majority(k));
      o.ok = o.ok && streamed == want[k - 1] && recmaj_linear_sum(k) == want[k - 1];
      o.detail += (k > 1 ? ", " : "") + std::string("k=") + std::to_string(k) + ": " + str(streamed);
    }
    return o;
  });

  criterion(3, "depth lower bound for recursive majority is 1, 2, 5", [] {
    Outcome o;
    const unsigned want[] = {1, 2, 5};
    for (unsigned k = 1; k <= 3; ++k) {
      const unsigned got = depth_lower_bound(recursive_majority(k));
      const auto formula = static_cast<unsigned>(std::ceil(std::pow(2.25, k) / (4 * std::log(2.0))));
      o.ok = o.ok && got == want[k - 1] && got == formula && recmaj_depth_bound(k) == got;
      o.detail += (k > 1 ? ", " : "") + std::to_string(got);
    }
    return o;
  });

  criterion(4, "MAJ3 tree second moment 5/2 (> d = 2, <= 2d = 4)", [&] {
    const Rational m = second_moment(maj3_tree);
    const Rational via_oracle = oracle_second_moment(maj3_tree);
    return Outcome{m == Rational(5, 2) && via_oracle == m && m > depth(maj3_tree) && m <= 2 * depth(maj3_tree),
                   "E(sum l)^2=" + str(m)};
  });

  criterion(5, "second-moment bounds on exhaustive and 1e5 random trees", [] {
    std::uint64_t checked = 0, violations = 0, cf_trees = 0;
    auto check = [&](const ParityDecisionTree& t) {
      const auto m = moments(t);
      const Rational d = m.depth;
      ++checked;
      if (m.second_moment > 2 * d) ++violations;
      if (m.second_moment > 2 * m.average_depth) ++violations;
      if (is_correlation_free(t)) {
        ++cf_trees;
        if (m.second_moment > d) ++violations;
      }
    };
    for (const auto& t : exhaustive_trees()) check(t);
    Rng rng(2024);
    for (int trial = 0; trial < 100000; ++trial) check(random_tree(rng, 8, 5, trial % 4 == 0));
    return Outcome{violations == 0, std::to_string(checked) + " trees, " + std::to_string(cf_trees) +
                                        " correlation-free, " + std::to_string(violations) + " violations"};
  });

  criterion(6, "refinement on 1e4 random trees", [] {
    Rng rng(2025);
    std::uint64_t bad = 0;
    unsigned max_growth = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const auto t = random_tree(rng, 8, 5);
      const auto r = refine_correlation_free(t);
      if (!is_correlation_free(r) || depth(r) > 2 * depth(t) || induced_function(r) != induced_function(t)) ++bad;
      max_growth = std::max(max_growth, depth(r) - depth(t));
    }
    return Outcome{bad == 0, std::to_string(bad) + " exceptions, max depth growth " + std::to_string(max_growth)};
  });

  criterion(7, "leaf split increases second moment by mass * delta^2 (1e4 splits)", [] {
    Rng rng(2026);
    std::uint64_t bad = 0, strict = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const auto t = random_tree(rng, 8, 4);
      const unsigned n = t.arity();
      const auto leaves = census_leaves(t);
      auto it = leaves.begin();
      std::advance(it, static_cast<long>(rng.below(leaves.size())));
      const Mask mask = rng.between(1, (n == 64 ? ~Mask{0} : (Mask{1} << n) - 1));
      const auto split = split_leaf(t, it->first, mask);
      // delta from the points, not the elimination: sum of coordinates that
      // become constant on the + child.
      const auto after = census_leaves(split);
      int delta = 0;
      const auto child = after.find(it->first + "+");
      if (child != after.end() && child->second.mass > 0) {
        for (unsigned i = 0; i < n; ++i) {
          if (it->second.vector[i] == 0) delta += child->second.vector[i];
        }
      }
      const Rational increase = second_moment(split) - second_moment(t);
      if (increase < 0 || increase != it->second.mass * (delta * delta)) ++bad;
      if (increase > 0) ++strict;
    }
    return Outcome{bad == 0, std::to_string(bad) + " mismatches, " + std::to_string(strict) + " strict increases"};
  });

  criterion(8, "level-1 inequalities and entropy chain on induced pairs", [] {
    std::uint64_t pairs = 0, violations = 0, equalities = 0;
    double worst_definitional = 0;
    auto check = [&](const ParityDecisionTree& t) {
      const auto f = induced_function(t);
      ++pairs;
      if (!theorem1_check(f, t).holds) ++violations;
      if (!theorem4_check(f, t).holds) ++violations;
      const auto l3 = lemma3_check(f, t);
      if (!l3.holds) ++violations;
      if (l3.equality) ++equalities;
      if (f.is_constant()) return;
      const auto chain = entropy_chain(f, t);
      if (!chain.holds()) ++violations;
      const double dv = std::abs(chain.h_given_f - oracle::definitional_entropy_given_value(f));
      const double dl = std::abs(chain.h_given_leaf - oracle::definitional_entropy_given_leaf(t));
      worst_definitional = std::max({worst_definitional, dv, dl});
    };
    for (const auto& t : exhaustive_trees()) check(t);
    Rng rng(2027);
    for (int trial = 0; trial < 10000; ++trial) check(random_tree(rng, 8, 5));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2e", worst_definitional);
    return Outcome{violations == 0 && worst_definitional <= 1e-9,
                   std::to_string(pairs) + " pairs, " + std::to_string(violations) + " violations, " +
                       std::to_string(equalities) + " lemma3 equalities, max entropy error " + buf};
  });

  criterion(9, "composed level-1 coefficients are products", [] {
    std::uint64_t compositions = 0, bad = 0;
    for (unsigned n = 1; n <= 3; ++n) {
      for (const auto& g : oracle::enumerate_functions(n)) {
        if (!g.is_balanced()) continue;
        std::vector<Rational> gc(n);
        for (unsigned j = 0; j < n; ++j) gc[j] = direct_linear(g, j);
        for (unsigned m = 1; m <= 3; ++m) {
          for (const auto& f : oracle::enumerate_functions(m)) {
            const auto h = compose(f, g);
            const auto fast = linear_coefficients(h);
            ++compositions;
            for (unsigned i = 0; i < m; ++i) {
              const Rational fi = direct_linear(f, i);
              for (unsigned j = 0; j < n; ++j) {
                const Rational want = fi * gc[j];
                if (direct_linear(h, i * n + j) != want || fast[i * n + j] != want) ++bad;
              }
            }
          }
        }
      }
    }
    return Outcome{bad == 0, std::to_string(compositions) + " compositions, " + std::to_string(bad) + " mismatches"};
  });

  criterion(10, "fast transform equals direct sum", [] {
    std::uint64_t bad = 0, count = 0;
    for (const auto& f : oracle::enumerate_functions(3)) {
      ++count;
      if (spectrum(f).coef != oracle::brute_force_spectrum(f).coef) ++bad;
    }
    Rng rng(2028);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto f = oracle::random_function(static_cast<unsigned>(rng.between(1, 10)), rng);
      ++count;
      if (spectrum(f).coef != oracle::brute_force_spectrum(f).coef) ++bad;
    }
    return Outcome{bad == 0, std::to_string(count) + " functions, " + std::to_string(bad) + " mismatches"};
  });

  criterion(11, "exact solver consistency", [] {
    const auto m = oracle::min_pdt_depth(maj3());
    const auto p = oracle::min_pdt_depth(parity(4));
    std::uint64_t unsound = 0;
    for (const auto& f : oracle::enumerate_functions(3)) {
      const auto r = oracle::min_pdt_depth(f);
      if (!computes(r.certificate, f)) ++unsound;
      if (!f.is_constant() && depth_lower_bound(f) > r.depth) ++unsound;
    }
    return Outcome{m.depth == 2 && p.depth == 1 && unsound == 0 && computes(m.certificate, maj3()),
                   "maj3 " + std::to_string(m.depth) + ", parity(4) " + std::to_string(p.depth) + ", " +
                       std::to_string(unsound) + " unsound bounds"};
  });

  criterion(12, "binary entropy two-sided bound at 1e6 grid points", [] {
    const double c = 1 / (2 * std::log(2.0));
    const int points = 1000000;
    std::uint64_t bad = 0;
    for (int k = 0; k < points; ++k) {
      const double t = -1 + 2.0 * k / (points - 1);
      const double h = binary_entropy(0.5 + t / 2);
      if (h < 1 - t * t - 1e-12 || h > 1 - t * t * c + 1e-12) ++bad;
    }
    return Outcome{bad == 0, std::to_string(points) + " points, " + std::to_string(bad) + " violations"};
  });

  std::printf("%s\n", failures == 0 ? "all acceptance criteria passed" : "acceptance FAILED");
  return failures == 0 ? 0 : 1;
}
