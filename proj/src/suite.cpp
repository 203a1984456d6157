#include <bit>
#include <cmath>
#include <functional>
#include <map>

#include "bft/bounds.hpp"
#include "bft/gf2.hpp"
#include "bft/oracle.hpp"

namespace bft::oracle {

namespace {

class Recorder {
 public:
  explicit Recorder(const SuiteConfig& cfg) : cfg_(cfg) {}

  void record(const std::string& name, bool ok, const std::function<std::string()>& payload,
              std::optional<double> slack = std::nullopt, bool equality = false) {
    auto& t = tally(name);
    if (ok) {
      ++t.passed;
    } else {
      ++t.failed;
      if (t.counterexamples.size() < cfg_.max_counterexamples) t.counterexamples.push_back(payload());
    }
    if (equality) ++t.equalities;
    if (slack && (!t.worst_slack || *slack < *t.worst_slack)) t.worst_slack = slack;
  }

  void record(const InequalityReport& r, const std::string& name, const std::function<std::string()>& payload) {
    record(name, r.holds, payload, r.slack, r.equality);
  }

  SuiteReport finish() { return SuiteReport{std::move(checks_)}; }

 private:
  CheckTally& tally(const std::string& name) {
    if (auto it = index_.find(name); it != index_.end()) return checks_[it->second];
    index_.emplace(name, checks_.size());
    CheckTally t;
    t.name = name;
    checks_.push_back(std::move(t));
    return checks_.back();
  }

  const SuiteConfig& cfg_;
  std::vector<CheckTally> checks_;
  std::map<std::string, std::size_t> index_;
};

std::function<std::string()> tree_payload(const ParityDecisionTree& t) {
  return [&t] { return to_text(t); };
}

std::function<std::string()> pair_payload(const BooleanFunction& f, const ParityDecisionTree& t) {
  return [&f, &t] { return to_text(f) + to_text(t); };
}

bool all_singleton_masks(const ParityDecisionTree& t) {
  for (std::size_t id = 0; id < t.node_count(); ++id) {
    const auto& nd = t.node(id);
    if (!nd.is_leaf() && !std::has_single_bit(nd.mask)) return false;
  }
  return true;
}

// Every leaf of `t` sits above a subtree of `r` whose leaves all carry its label.
bool is_refinement(const ParityDecisionTree& t, std::size_t tid, const ParityDecisionTree& r, std::size_t rid) {
  const auto& a = t.node(tid);
  const auto& b = r.node(rid);
  if (a.is_leaf()) {
    std::function<bool(std::size_t)> uniform = [&](std::size_t id) {
      const auto& nd = r.node(id);
      return nd.is_leaf() ? nd.label == a.label : uniform(nd.pos) && uniform(nd.neg);
    };
    return uniform(rid);
  }
  return !b.is_leaf() && a.mask == b.mask && is_refinement(t, a.pos, r, b.pos) && is_refinement(t, a.neg, r, b.neg);
}

void check_tree(Recorder& rec, const ParityDecisionTree& t, const SuiteConfig& cfg) {
  const auto leaves = leaf_summaries(t);
  const auto m = moments(leaves);
  const auto payload = tree_payload(t);

  Rational mass = 0;
  for (const auto& leaf : leaves) mass += leaf.mass;
  rec.record("pdt.mass_sum", mass == 1, payload);

  const Rational d = m.depth;
  rec.record("pdt.lemma1", m.second_moment <= cfg.lemma1_factor * d, payload,
             to_double(cfg.lemma1_factor * d - m.second_moment), m.second_moment == cfg.lemma1_factor * d);
  rec.record("pdt.average_depth", m.second_moment <= 2 * m.average_depth, payload,
             to_double(2 * m.average_depth - m.second_moment));
  bool correlation_free = true;
  for (const auto& leaf : leaves) {
    if (leaf.live() && !leaf.summary.correlated_pairs.empty()) correlation_free = false;
  }
  if (correlation_free) {
    rec.record("pdt.prop1", m.second_moment <= d, payload, to_double(d - m.second_moment));
  }
  if (all_singleton_masks(t)) {
    rec.record("pdt.plain_tree", correlation_free && m.second_moment <= d, payload, to_double(d - m.second_moment));
  }
}

void check_refine(Recorder& rec, const ParityDecisionTree& t) {
  const auto r = refine_correlation_free(t);
  const bool ok = is_correlation_free(r) && depth(r) <= 2 * depth(t) && induced_function(r) == induced_function(t) &&
                  is_refinement(t, 0, r, 0);
  rec.record("pdt.prop2_refine", ok, tree_payload(t), static_cast<double>(2 * depth(t)) - depth(r));
}

void check_split(Recorder& rec, const ParityDecisionTree& t, Rng& rng) {
  const auto before = leaf_summaries(t);
  const auto& target = before[rng.below(before.size())];
  const Mask mask = rng.between(1, gf2::column_mask(t.arity()));
  const auto split = split_leaf(t, target.leaf_id, mask);
  const auto after = leaf_summaries(split);

  const LeafSummary* u = nullptr;
  const LeafSummary* w = nullptr;
  for (const auto& leaf : after) {
    if (leaf.leaf_id == target.leaf_id + "+") u = &leaf;
    if (leaf.leaf_id == target.leaf_id + "-") w = &leaf;
  }
  // delta: sum of u over coordinates forced in u but not in the parent; the
  // sibling must give -delta over the same set.
  auto newly_forced_sum = [&](const LeafSummary& child) {
    int s = 0;
    for (const auto& [col, bit] : child.summary.forced) {
      if (!target.summary.forced.contains(col)) s += child.vector[col];
    }
    return s;
  };
  int delta = 0;
  bool antisymmetric = true;
  if (u->live() && w->live()) {
    delta = newly_forced_sum(*u);
    antisymmetric = newly_forced_sum(*w) == -delta;
  } else if (u->live()) {
    delta = newly_forced_sum(*u);
  } else if (w->live()) {
    delta = newly_forced_sum(*w);
  }
  const Rational increase = moments(after).second_moment - moments(before).second_moment;
  const bool ok = antisymmetric && increase >= 0 && increase == target.mass * (delta * delta) &&
                  (increase == 0) == (delta == 0 || target.mass == 0) && induced_function(split) == induced_function(t);
  rec.record("pdt.prop3_split", ok, [&t, &target, mask] {
    return to_text(t) + "leaf=" + target.leaf_id + " mask=" + mask_string(mask) + "\n";
  });
}

void check_leaf_vectors(Recorder& rec, const ParityDecisionTree& t) {
  const auto leaves = leaf_summaries(t);
  std::map<std::string, LeafCensus> census;
  for (auto& c : leaf_census(t)) census.emplace(c.leaf_id, std::move(c));
  const std::uint64_t points = std::uint64_t{1} << t.arity();
  bool ok = true;
  for (const auto& leaf : leaves) {
    const auto it = census.find(leaf.leaf_id);
    const std::uint64_t reached = it == census.end() ? 0 : it->second.points;
    ok = ok && leaf.mass == Rational(reached, points) && leaf.live() == (reached > 0);
    if (reached == 0) continue;
    for (unsigned i = 0; i < t.arity(); ++i) {
      ok = ok && Rational(leaf.vector[i]) == Rational(it->second.coordinate_totals[i], reached);
    }
  }
  rec.record("pdt.leaf_vector_oracle", ok, tree_payload(t));
}

void check_pair(Recorder& rec, const BooleanFunction& f, const ParityDecisionTree& t, const SuiteConfig& cfg) {
  const auto payload = pair_payload(f, t);
  rec.record(theorem1_check(f, t), "bounds.theorem1", payload);
  rec.record(theorem4_check(f, t), "bounds.theorem4", payload);
  rec.record(lemma3_check(f, t), "bounds.lemma3", payload);
  if (f.is_constant()) return;

  const auto chain = entropy_chain(f, t);
  rec.record("bounds.entropy_upper", chain.upper_holds, payload, chain.eq1_bound - chain.h_given_f);
  rec.record("bounds.data_processing", chain.processing_holds, payload, chain.h_given_f - chain.h_given_leaf);
  rec.record("bounds.entropy_lower", chain.lower_holds, payload, chain.h_given_leaf - chain.eq3_bound);

  const double given_f = definitional_entropy_given_value(f);
  rec.record("bounds.h_given_f_definitional", std::abs(given_f - chain.h_given_f) <= cfg.tolerance, payload,
             cfg.tolerance - std::abs(given_f - chain.h_given_f));
  const double given_leaf = definitional_entropy_given_leaf(t);
  rec.record("bounds.h_given_leaf_definitional", std::abs(given_leaf - chain.h_given_leaf) <= cfg.tolerance,
             payload, cfg.tolerance - std::abs(given_leaf - chain.h_given_leaf));
}

void gf2_checks(Recorder& rec, const SuiteConfig& cfg, Rng& rng) {
  for (std::uint64_t trial = 0; trial < cfg.random_trials; ++trial) {
    // Small systems: everything checked against enumeration of 2^n points.
    const unsigned n = static_cast<unsigned>(rng.between(1, 4));
    const unsigned rows = static_cast<unsigned>(rng.between(0, 6));
    gf2::AffineSystem sys(n);
    for (unsigned r = 0; r < rows; ++r) sys.add(rng.below(gf2::column_mask(n) + 1), rng.coin());
    const auto summary = gf2::analyze_system(sys);

    std::vector<std::uint64_t> sols;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      bool ok = true;
      for (unsigned r = 0; r < rows && ok; ++r) ok = (std::popcount(sys.matrix().row(r) & x) % 2 == 1) == sys.rhs()[r];
      if (ok) sols.push_back(x);
    }
    auto payload = [&] {
      std::string s = "n=" + std::to_string(n) + "\n";
      for (unsigned r = 0; r < rows; ++r) s += mask_string(sys.matrix().row(r)) + " = " + (sys.rhs()[r] ? "1" : "0") + "\n";
      return s;
    };
    rec.record("gf2.rank_bound", summary.rank <= std::min<std::size_t>(rows, n), payload);
    rec.record("gf2.consistency", summary.consistent == !sols.empty(), payload);
    if (sols.empty()) continue;
    rec.record("gf2.solution_count", sols.size() == (std::uint64_t{1} << (n - summary.rank)), payload);

    bool forced_ok = true;
    bool pairs_ok = true;
    for (unsigned i = 0; i < n; ++i) {
      const auto bit = [&](std::uint64_t x, unsigned k) { return (x >> k) & 1u; };
      const bool agree = std::all_of(sols.begin(), sols.end(), [&](auto x) { return bit(x, i) == bit(sols[0], i); });
      const auto it = summary.forced.find(i);
      forced_ok = forced_ok && agree == (it != summary.forced.end()) && (!agree || it->second == bit(sols[0], i));
      for (unsigned j = i + 1; j < n; ++j) {
        const bool pair_fixed = std::all_of(sols.begin(), sols.end(), [&](auto x) {
          return (bit(x, i) ^ bit(x, j)) == (bit(sols[0], i) ^ bit(sols[0], j));
        });
        const bool expected = pair_fixed && !agree;
        const bool reported = std::find(summary.correlated_pairs.begin(), summary.correlated_pairs.end(),
                                        std::pair<std::size_t, std::size_t>{i, j}) != summary.correlated_pairs.end();
        pairs_ok = pairs_ok && expected == reported;
      }
    }
    rec.record("gf2.forced_oracle", forced_ok, payload);
    rec.record("gf2.correlated_oracle", pairs_ok, payload);
  }

  for (std::uint64_t trial = 0; trial < cfg.random_trials / 10 + 1; ++trial) {
    const unsigned cols = static_cast<unsigned>(rng.between(1, 64));
    const unsigned rows = static_cast<unsigned>(rng.between(0, 12));
    std::vector<gf2::BitRow> data;
    for (unsigned r = 0; r < rows; ++r) data.push_back(rng.next() & gf2::column_mask(cols) & (rng.next() | rng.next()));
    const std::size_t r0 = gf2::rank(gf2::BitMatrix(cols, data));
    for (int op = 0; op < 20 && rows > 1; ++op) {
      const auto a = rng.below(rows);
      const auto b = rng.below(rows);
      if (a == b) continue;
      if (rng.coin()) {
        data[b] ^= data[a];
      } else {
        std::swap(data[a], data[b]);
      }
    }
    const std::size_t r1 = gf2::rank(gf2::BitMatrix(cols, data));
    rec.record("gf2.rank_row_ops", r0 == r1 && r0 <= std::min<std::size_t>(rows, cols),
               [cols, rows] { return "cols=" + std::to_string(cols) + " rows=" + std::to_string(rows) + "\n"; });
  }
}

void boolfn_checks(Recorder& rec, const SuiteConfig& cfg, Rng& rng) {
  const auto fn_payload = [](const BooleanFunction& f) { return [&f] { return to_text(f); }; };

  for_each_function(3, [&](const BooleanFunction& f) {
    rec.record("boolfn.fast_vs_brute", spectrum(f).coef == brute_force_spectrum(f).coef, fn_payload(f));
  });
  for (std::uint64_t trial = 0; trial < cfg.random_trials / 10 + 1; ++trial) {
    const auto f = random_function(static_cast<unsigned>(rng.between(1, 10)), rng);
    const auto s = spectrum(f);
    rec.record("boolfn.fast_vs_brute", s.coef == brute_force_spectrum(f).coef, fn_payload(f));
    rec.record("boolfn.linear_streaming", [&] {
      const auto c = linear_correlations(f);
      for (unsigned i = 0; i < f.arity(); ++i) {
        if (c[i] != s.coef[std::uint64_t{1} << i]) return false;
      }
      return true;
    }(), fn_payload(f));
  }
  for (std::uint64_t trial = 0; trial < cfg.random_trials / 10 + 1; ++trial) {
    const auto f = random_function(static_cast<unsigned>(rng.between(1, 12)), rng);
    const auto s = spectrum(f);
    const boost::multiprecision::cpp_int four_n = boost::multiprecision::cpp_int(1) << (2 * f.arity());
    rec.record("boolfn.parseval", s.parseval_mass() == four_n, fn_payload(f));
    rec.record("boolfn.inverse_roundtrip", inverse_spectrum(s) == f, fn_payload(f));
  }

  for (unsigned k = 1; k <= 3; ++k) {
    const Rational streamed = linear_sum(recursive_majority(k));
    Rational expected = 1;
    for (unsigned j = 0; j < k; ++j) expected *= Rational(3, 2);
    rec.record("boolfn.recmaj_sums", streamed == expected && recmaj_linear_sum(k) == expected,
               [k] { return "recmaj k=" + std::to_string(k) + "\n"; });
  }

  // Level-1 multiplicativity for balanced inner functions.
  for (unsigned m = 1; m <= 3; ++m) {
    const auto outers = enumerate_functions(m);
    for (unsigned n = 1; n <= 3; ++n) {
      for (const auto& g : enumerate_functions(n)) {
        if (!g.is_balanced()) continue;
        const auto gc = linear_correlations(g);
        for (const auto& f : outers) {
          const auto fc = linear_correlations(f);
          const auto hc = linear_correlations(compose(f, g));
          bool ok = true;
          for (unsigned i = 0; i < m; ++i) {
            for (unsigned j = 0; j < n; ++j) {
              // c_h / 2^(mn) == (c_f / 2^m)(c_g / 2^n)
              ok = ok && dyadic(hc[i * n + j], m * n) == dyadic(fc[i], m) * dyadic(gc[j], n);
            }
          }
          rec.record("boolfn.composition_identity", ok, [&f, &g] { return to_text(f) + to_text(g); });
        }
      }
    }
  }

  // Unbalanced inner functions: constant g collapses f o g to a constant; an
  // unbalanced non-constant g breaks the identity.
  {
    const auto g = constant(2, 1);
    const auto h = compose(parity(2), g);
    rec.record("boolfn.composition_unbalanced", h.is_constant() && linear_sum(h) == 0, [] { return std::string("constant g\n"); });
    const auto and2 = BooleanFunction::from_predicate(2, [](std::uint64_t x) { return x == 3; });
    const auto hc = linear_coefficients(compose(parity(2), and2));
    const auto fc = linear_coefficients(parity(2));
    const auto gc = linear_coefficients(and2);
    bool differs = false;
    for (unsigned i = 0; i < 2; ++i) {
      for (unsigned j = 0; j < 2; ++j) differs = differs || hc[i * 2 + j] != fc[i] * gc[j];
    }
    rec.record("boolfn.composition_unbalanced", differs, [] { return std::string("parity2 o and2\n"); });
  }
}

void bounds_fact_grid(Recorder& rec, std::uint64_t points) {
  const double two_ln2 = 2 * std::log(2.0);
  for (std::uint64_t k = 0; k <= points; ++k) {
    const double t = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(points);
    const double h = binary_entropy(0.5 + t / 2);
    const bool ok = 1 - t * t <= h + 1e-12 && h <= 1 - t * t / two_ln2 + 1e-12;
    rec.record("bounds.entropy_fact", ok, [t] { return "t=" + format_real(t) + "\n"; },
               std::min(h - (1 - t * t), 1 - t * t / two_ln2 - h));
  }
}

void solver_checks(Recorder& rec, const SuiteConfig& cfg) {
  const unsigned max_n = std::min(cfg.max_n_exhaustive, 3u);
  for (unsigned n = 1; n <= max_n; ++n) {
    for_each_function(n, [&](const BooleanFunction& f) {
      const auto pdt = min_pdt_depth(f);
      const auto dt = min_dt_depth(f);
      const auto payload = [&f] { return to_text(f); };
      rec.record("oracle.certificates", computes(pdt.certificate, f) && depth(pdt.certificate) == pdt.depth &&
                                            computes(dt.certificate, f) && depth(dt.certificate) == dt.depth,
                 payload);
      rec.record("oracle.solver_vs_plain", pdt.depth <= dt.depth, payload);
      if (!f.is_constant()) {
        const unsigned lb = depth_lower_bound(f);
        rec.record("bounds.lower_bound_sound", lb <= pdt.depth, payload, static_cast<double>(pdt.depth) - lb);
      }
    });
  }
  const auto m = maj3();
  const auto pdt = min_pdt_depth(m);
  const auto dt = min_dt_depth(m);
  rec.record("oracle.maj3_solver", pdt.depth == 2 && dt.depth == 3 && !all_singleton_masks(pdt.certificate),
             [] { return std::string("maj3\n"); });
  const auto p4 = min_pdt_depth(parity(4));
  rec.record("oracle.parity4_solver", p4.depth == 1, [] { return std::string("parity4\n"); });
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& cfg) {
  Recorder rec(cfg);
  Rng rng(cfg.seed);

  gf2_checks(rec, cfg, rng);
  boolfn_checks(rec, cfg, rng);
  bounds_fact_grid(rec, 10000);

  // Exhaustive trees: tree invariants, refinement, and the induced pair.
  for (unsigned n = 1; n <= cfg.max_n_exhaustive; ++n) {
    for (const auto& t : enumerate_trees(n, cfg.max_depth_exhaustive)) {
      check_tree(rec, t, cfg);
      check_refine(rec, t);
      if (n <= 4) check_leaf_vectors(rec, t);
      const auto f = induced_function(t);
      check_pair(rec, f, t, cfg);
    }
  }

  // Random trees for the second-moment bounds; every fourth is a plain tree.
  for (std::uint64_t trial = 0; trial < cfg.lemma1_trials; ++trial) {
    const auto n = static_cast<unsigned>(rng.between(1, cfg.random_max_n));
    const auto d = static_cast<unsigned>(rng.between(0, cfg.random_max_depth));
    check_tree(rec, random_pdt(n, d, rng, trial % 4 == 3), cfg);
  }

  for (std::uint64_t trial = 0; trial < cfg.random_trials; ++trial) {
    const auto n = static_cast<unsigned>(rng.between(1, cfg.random_max_n));
    const auto d = static_cast<unsigned>(rng.between(0, cfg.random_max_depth));
    const auto t = random_pdt(n, d, rng);
    check_refine(rec, t);
    check_split(rec, t, rng);
    if (n <= 4) check_leaf_vectors(rec, t);
    const auto f = induced_function(t);
    check_pair(rec, f, t, cfg);
  }

  solver_checks(rec, cfg);
  return rec.finish();
}

}  // namespace bft::oracle
