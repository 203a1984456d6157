#include "bft/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "bft/bounds.hpp"
#include "bft/gf2.hpp"

namespace bft::oracle {

FourierSpectrum brute_force_spectrum(const BooleanFunction& f) {
  if (f.arity() > kBruteForceMaxArity) {
    throw std::invalid_argument("brute-force spectrum is limited to arity 12");
  }
  FourierSpectrum s;
  s.n = f.arity();
  s.coef.assign(f.size(), 0);
  for (std::uint64_t mask = 0; mask < f.size(); ++mask) {
    std::int64_t total = 0;
    for (std::uint64_t x = 0; x < f.size(); ++x) {
      const int chi = std::popcount(mask & x) % 2 == 0 ? 1 : -1;
      total += f.evaluate(x) * chi;
    }
    s.coef[mask] = total;
  }
  return s;
}

void for_each_function(unsigned n, const std::function<void(const BooleanFunction&)>& visit) {
  if (n < 1 || n > kEnumerationMaxArity) throw std::invalid_argument("function enumeration is limited to arity 1..4");
  const std::uint64_t points = std::uint64_t{1} << n;
  const std::uint64_t count = std::uint64_t{1} << points;
  for (std::uint64_t code = 0; code < count; ++code) visit(BooleanFunction(n, {code}));
}

std::vector<BooleanFunction> enumerate_functions(unsigned n) {
  std::vector<BooleanFunction> out;
  for_each_function(n, [&](const BooleanFunction& f) { out.push_back(f); });
  return out;
}

BooleanFunction random_function(unsigned n, Rng& rng) {
  BooleanFunction::check_arity(n);
  std::vector<std::uint64_t> words(BooleanFunction::word_count(n));
  for (auto& w : words) w = rng.next();
  if (n < 6) words[0] &= (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
  return BooleanFunction(n, std::move(words));
}

namespace {

ParityDecisionTree random_subtree(unsigned n, unsigned remaining, bool spine, Rng& rng, bool plain) {
  if (remaining == 0 || (!spine && rng.below(4) == 0)) {
    return ParityDecisionTree::leaf(n, rng.coin() ? -1 : 1);
  }
  const Mask mask = plain ? Mask{1} << rng.below(n) : rng.between(1, gf2::column_mask(n));
  const bool spine_goes_pos = rng.coin();
  auto pos = random_subtree(n, remaining - 1, spine && spine_goes_pos, rng, plain);
  auto neg = random_subtree(n, remaining - 1, spine && !spine_goes_pos, rng, plain);
  return ParityDecisionTree::query(mask, pos, neg);
}

}  // namespace

ParityDecisionTree random_pdt(unsigned n, unsigned depth, Rng& rng, bool plain) {
  return random_subtree(n, depth, true, rng, plain);
}

ParityDecisionTree random_pdt(unsigned n, unsigned depth, std::uint64_t seed) {
  Rng rng(seed);
  return random_pdt(n, depth, rng);
}

std::vector<ParityDecisionTree> enumerate_trees(unsigned n, unsigned max_depth) {
  std::vector<ParityDecisionTree> trees{ParityDecisionTree::leaf(n, 1), ParityDecisionTree::leaf(n, -1)};
  for (unsigned d = 1; d <= max_depth; ++d) {
    std::vector<ParityDecisionTree> next{ParityDecisionTree::leaf(n, 1), ParityDecisionTree::leaf(n, -1)};
    for (Mask mask = 1; mask <= gf2::column_mask(n); ++mask) {
      for (const auto& a : trees) {
        for (const auto& b : trees) next.push_back(ParityDecisionTree::query(mask, a, b));
      }
    }
    trees = std::move(next);
  }
  return trees;
}

namespace {

class DepthSolver {
 public:
  DepthSolver(const BooleanFunction& f, bool plain) : f_(f), plain_(plain) {
    if (f.arity() > kSolverMaxArity) throw std::invalid_argument("exact solver is limited to arity 4");
  }

  unsigned solve(const gf2::AffineSystem& sys) {
    const auto red = gf2::reduce(sys);
    const auto key = canonical_key(sys, red);
    if (is_constant(key)) return 0;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    unsigned best = std::numeric_limits<unsigned>::max();
    for_each_query(red, [&](Mask mask) {
      const unsigned d = 1 + std::max(solve(child(sys, mask, false)), solve(child(sys, mask, true)));
      best = std::min(best, d);
      return best > 1;
    });
    memo_.emplace(key, best);
    return best;
  }

  ParityDecisionTree certificate(const gf2::AffineSystem& sys) {
    const auto red = gf2::reduce(sys);
    const auto key = canonical_key(sys, red);
    if (is_constant(key)) {
      const auto points = members(sys);
      return ParityDecisionTree::leaf(f_.arity(), f_.evaluate(points.front()));
    }
    const unsigned target = solve(sys);
    std::optional<ParityDecisionTree> out;
    for_each_query(red, [&](Mask mask) {
      const auto pos = child(sys, mask, false);
      const auto neg = child(sys, mask, true);
      if (1 + std::max(solve(pos), solve(neg)) != target) return true;
      out = ParityDecisionTree::query(mask, certificate(pos), certificate(neg));
      return false;
    });
    return *out;
  }

 private:
  // Key: (dimension, restricted table over the free coordinates). Bit k of
  // the table is f at the unique subspace point whose free coordinates
  // spell k. Constant iff table is all zeros or all ones.
  struct Key {
    unsigned dim;
    std::uint64_t table;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return std::hash<std::uint64_t>()(k.table * 64 + k.dim); }
  };

  std::vector<std::uint64_t> members(const gf2::AffineSystem& sys) const {
    std::vector<std::uint64_t> pts;
    const auto rows = sys.matrix().data();
    for (std::uint64_t x = 0; x < f_.size(); ++x) {
      bool ok = true;
      for (std::size_t r = 0; r < rows.size() && ok; ++r) {
        ok = (std::popcount(rows[r] & x) % 2 == 1) == sys.rhs()[r];
      }
      if (ok) pts.push_back(x);
    }
    return pts;
  }

  Key canonical_key(const gf2::AffineSystem& sys, const gf2::ReducedSystem& red) const {
    const gf2::BitRow pivots = red.pivot_columns();
    std::vector<unsigned> free_cols;
    for (unsigned c = 0; c < f_.arity(); ++c) {
      if (!((pivots >> c) & 1u)) free_cols.push_back(c);
    }
    Key key{static_cast<unsigned>(free_cols.size()), 0};
    for (std::uint64_t x : members(sys)) {
      std::uint64_t idx = 0;
      for (std::size_t k = 0; k < free_cols.size(); ++k) idx |= ((x >> free_cols[k]) & 1u) << k;
      if (f_.is_negative(x)) key.table |= std::uint64_t{1} << idx;
    }
    return key;
  }

  static bool is_constant(const Key& k) {
    const std::uint64_t full = (k.dim >= 6) ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::uint64_t{1} << k.dim)) - 1;
    return k.table == 0 || k.table == full;
  }

  // Visits queries in increasing mask order, skipping those already fixed on
  // the subspace; stops when `visit` returns false.
  template <class Visit>
  void for_each_query(const gf2::ReducedSystem& red, Visit&& visit) const {
    const Mask limit = gf2::column_mask(f_.arity());
    for (Mask mask = 1; mask <= limit; ++mask) {
      if (plain_ && !std::has_single_bit(mask)) continue;
      if (red.spans(mask)) continue;
      if (!visit(mask)) return;
    }
  }

  static gf2::AffineSystem child(const gf2::AffineSystem& sys, Mask mask, bool negative) {
    gf2::AffineSystem c = sys;
    c.add(mask, negative);
    return c;
  }

  const BooleanFunction& f_;
  bool plain_;
  std::unordered_map<Key, unsigned, KeyHash> memo_;
};

SolverResult solve_depth(const BooleanFunction& f, bool plain) {
  DepthSolver solver(f, plain);
  const gf2::AffineSystem root(f.arity());
  const unsigned d = solver.solve(root);
  return {d, solver.certificate(root)};
}

double entropy_from_counts(const std::map<std::pair<std::string, int>, std::uint64_t>& joint, double total) {
  std::map<std::string, std::uint64_t> marginal;
  for (const auto& [key, count] : joint) marginal[key.first] += count;
  double h = 0;
  for (const auto& [key, count] : joint) {
    if (count == 0) continue;
    const double pxy = static_cast<double>(count) / total;
    const double py = static_cast<double>(marginal[key.first]) / total;
    h += pxy * std::log2(py / pxy);
  }
  return h;
}

}  // namespace

SolverResult min_pdt_depth(const BooleanFunction& f) { return solve_depth(f, false); }
SolverResult min_dt_depth(const BooleanFunction& f) { return solve_depth(f, true); }

double definitional_entropy_given_value(const BooleanFunction& f) {
  std::map<std::pair<std::string, int>, std::uint64_t> joint;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const std::string y = f.is_negative(x) ? "-" : "+";
    for (unsigned i = 0; i < f.arity(); ++i) ++joint[{y, static_cast<int>((x >> i) & 1u)}];
  }
  return entropy_from_counts(joint, static_cast<double>(f.size()) * f.arity());
}

double definitional_entropy_given_leaf(const ParityDecisionTree& t) {
  std::map<std::pair<std::string, int>, std::uint64_t> joint;
  const std::uint64_t points = std::uint64_t{1} << t.arity();
  for (std::uint64_t x = 0; x < points; ++x) {
    const auto leaf = eval(t, x).leaf_id;
    for (unsigned i = 0; i < t.arity(); ++i) ++joint[{leaf, static_cast<int>((x >> i) & 1u)}];
  }
  return entropy_from_counts(joint, static_cast<double>(points) * t.arity());
}

std::vector<LeafCensus> leaf_census(const ParityDecisionTree& t) {
  if (t.arity() > 20) throw std::invalid_argument("leaf census enumerates at most 2^20 points");
  std::map<std::string, LeafCensus> by_leaf;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << t.arity()); ++x) {
    auto& c = by_leaf[eval(t, x).leaf_id];
    if (c.coordinate_totals.empty()) c.coordinate_totals.assign(t.arity(), 0);
    ++c.points;
    for (unsigned i = 0; i < t.arity(); ++i) c.coordinate_totals[i] += ((x >> i) & 1u) ? -1 : 1;
  }
  std::vector<LeafCensus> out;
  for (auto& [id, c] : by_leaf) {
    c.leaf_id = id;
    out.push_back(std::move(c));
  }
  return out;
}

bool SuiteReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckTally& c) { return c.failed == 0; });
}

const CheckTally* SuiteReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string SuiteReport::to_text() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << c.name << "\t" << c.passed << "\t" << c.failed << "\t" << c.equalities << "\t"
        << (c.worst_slack ? format_real(*c.worst_slack) : std::string("-")) << "\n";
  }
  return out.str();
}

}  // namespace bft::oracle
