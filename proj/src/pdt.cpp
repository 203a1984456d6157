#include "bft/pdt.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <numeric>

namespace bft {

namespace {

void check_tree_arity(unsigned n) {
  if (n < 1 || n > kMaxTreeArity) {
    throw std::invalid_argument("tree arity must be in [1, 64], got " + std::to_string(n));
  }
}

Mask unit(std::size_t i) { return Mask{1} << i; }

bool chi_negative(Mask mask, std::uint64_t x) { return std::popcount(mask & x) % 2 == 1; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  unsigned header() {
    skip_space();
    expect('n');
    skip_space();
    expect('=');
    skip_space();
    const std::size_t at = pos_;
    const std::uint64_t n = number();
    if (n < 1 || n > kMaxTreeArity) throw ParseError("arity out of range", at);
    return static_cast<unsigned>(n);
  }

  ParityDecisionTree tree(unsigned n) {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '+' || c == '-') {
      ++pos_;
      return ParityDecisionTree::leaf(n, c == '+' ? 1 : -1);
    }
    expect('(');
    skip_space();
    expect('Q');
    const Mask mask = mask_list(n);
    ParityDecisionTree pos = tree(n);
    ParityDecisionTree neg = tree(n);
    skip_space();
    expect(')');
    return ParityDecisionTree::query(mask, pos, neg);
  }

  void finish() {
    skip_space();
    if (pos_ != text_.size()) throw ParseError("trailing characters after tree", pos_);
  }

 private:
  Mask mask_list(unsigned n) {
    Mask mask = 0;
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (at >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[at]))) {
        throw ParseError("expected a coordinate index", at);
      }
      const std::uint64_t i = number();
      if (i < 1 || i > n) throw ParseError("index " + std::to_string(i) + " outside [1, " + std::to_string(n) + "]", at);
      if (mask & unit(i - 1)) throw ParseError("duplicate index " + std::to_string(i), at);
      mask |= unit(i - 1);
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      return mask;
    }
  }

  std::uint64_t number() {
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (v > 1'000'000) throw ParseError("number too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected a number", start);
    return v;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void write_expression(const ParityDecisionTree& t, std::size_t id, std::string& out) {
  const auto& nd = t.node(id);
  if (nd.is_leaf()) {
    out.push_back(nd.label > 0 ? '+' : '-');
    return;
  }
  out += "(Q ";
  out += mask_string(nd.mask);
  out.push_back(' ');
  write_expression(t, nd.pos, out);
  out.push_back(' ');
  write_expression(t, nd.neg, out);
  out.push_back(')');
}

unsigned depth_from(const ParityDecisionTree& t, std::size_t id) {
  const auto& nd = t.node(id);
  if (nd.is_leaf()) return 0;
  return 1 + std::max(depth_from(t, nd.pos), depth_from(t, nd.neg));
}

void collect_leaves(const ParityDecisionTree& t, std::size_t id, gf2::AffineSystem& sys, std::string& path,
                    std::vector<LeafSummary>& out) {
  const auto& nd = t.node(id);
  if (nd.is_leaf()) {
    LeafSummary leaf;
    leaf.leaf_id = path;
    leaf.label = nd.label;
    leaf.system = sys;
    leaf.summary = gf2::analyze_system(sys);
    leaf.path_length = static_cast<unsigned>(path.size());
    leaf.mass = leaf.summary.consistent ? dyadic(1, static_cast<unsigned>(leaf.summary.rank)) : Rational(0);
    leaf.vector.assign(t.arity(), 0);
    for (const auto& [col, bit] : leaf.summary.forced) leaf.vector[col] = bit ? -1 : 1;
    out.push_back(std::move(leaf));
    return;
  }
  for (const bool negative : {false, true}) {
    gf2::AffineSystem child = sys;
    child.add(nd.mask, negative);
    path.push_back(negative ? '-' : '+');
    collect_leaves(t, negative ? nd.neg : nd.pos, child, path, out);
    path.pop_back();
  }
}

// Minimum index of each connected component of the correlation graph, ascending.
std::vector<std::size_t> class_representatives(std::size_t n,
                                               const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  std::vector<bool> touched(n, false);
  for (const auto& [i, j] : pairs) {
    touched[i] = touched[j] = true;
    const auto a = find(i);
    const auto b = find(j);
    parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> reps;
  for (std::size_t v = 0; v < n; ++v) {
    if (touched[v] && find(v) == v) reps.push_back(v);
  }
  return reps;
}

ParityDecisionTree extend_leaf(unsigned n, int label, const gf2::AffineSystem& sys);

ParityDecisionTree query_chain(unsigned n, int label, const gf2::AffineSystem& sys,
                               const std::vector<std::size_t>& reps, std::size_t k) {
  if (k == reps.size()) return extend_leaf(n, label, sys);
  const Mask q = unit(reps[k]);
  if (gf2::reduce(sys).spans(q)) return query_chain(n, label, sys, reps, k + 1);
  gf2::AffineSystem pos = sys;
  gf2::AffineSystem neg = sys;
  pos.add(q, false);
  neg.add(q, true);
  return ParityDecisionTree::query(q, query_chain(n, label, pos, reps, k + 1),
                                   query_chain(n, label, neg, reps, k + 1));
}

// Fixpoint: one round queries every correlation class once, then the leaf is
// re-analyzed since new units can expose new pairwise relations.
ParityDecisionTree extend_leaf(unsigned n, int label, const gf2::AffineSystem& sys) {
  const auto summary = gf2::analyze_system(sys);
  if (!summary.consistent || summary.correlated_pairs.empty()) return ParityDecisionTree::leaf(n, label);
  return query_chain(n, label, sys, class_representatives(n, summary.correlated_pairs), 0);
}

ParityDecisionTree refine_from(const ParityDecisionTree& t, std::size_t id, const gf2::AffineSystem& sys) {
  const auto& nd = t.node(id);
  if (nd.is_leaf()) return extend_leaf(t.arity(), nd.label, sys);
  gf2::AffineSystem pos = sys;
  gf2::AffineSystem neg = sys;
  pos.add(nd.mask, false);
  neg.add(nd.mask, true);
  return ParityDecisionTree::query(nd.mask, refine_from(t, nd.pos, pos), refine_from(t, nd.neg, neg));
}

ParityDecisionTree split_from(const ParityDecisionTree& t, std::size_t id, std::string& path,
                              std::string_view target, Mask mask, bool& found) {
  const auto& nd = t.node(id);
  if (nd.is_leaf()) {
    const auto here = ParityDecisionTree::leaf(t.arity(), nd.label);
    if (path != target) return here;
    found = true;
    return ParityDecisionTree::query(mask, here, here);
  }
  path.push_back('+');
  auto pos = split_from(t, nd.pos, path, target, mask, found);
  path.back() = '-';
  auto neg = split_from(t, nd.neg, path, target, mask, found);
  path.pop_back();
  return ParityDecisionTree::query(nd.mask, pos, neg);
}

}  // namespace

ParityDecisionTree ParityDecisionTree::leaf(unsigned n, int label) {
  check_tree_arity(n);
  if (label != 1 && label != -1) throw std::invalid_argument("leaf label must be +1 or -1");
  Node nd;
  nd.label = label;
  return ParityDecisionTree(n, {nd});
}

ParityDecisionTree ParityDecisionTree::query(Mask mask, const ParityDecisionTree& pos,
                                             const ParityDecisionTree& neg) {
  if (pos.n_ != neg.n_) throw std::invalid_argument("subtrees have different arity");
  if (mask == 0) throw std::invalid_argument("query mask must be nonempty");
  if ((mask & ~gf2::column_mask(pos.n_)) != 0) throw std::invalid_argument("query mask outside [n]");

  std::vector<Node> nodes;
  nodes.reserve(1 + pos.nodes_.size() + neg.nodes_.size());
  Node root;
  root.mask = mask;
  root.pos = 1;
  root.neg = 1 + pos.nodes_.size();
  nodes.push_back(root);
  for (const auto* sub : {&pos, &neg}) {
    const std::size_t offset = nodes.size();
    for (Node nd : sub->nodes_) {
      if (!nd.is_leaf()) {
        nd.pos += offset;
        nd.neg += offset;
      }
      nodes.push_back(nd);
    }
  }
  return ParityDecisionTree(pos.n_, std::move(nodes));
}

ParityDecisionTree parse_tree(std::string_view text) {
  Parser p(text);
  const unsigned n = p.header();
  auto t = p.tree(n);
  p.finish();
  return t;
}

ParityDecisionTree parse_tree(unsigned n, std::string_view expr) {
  check_tree_arity(n);
  Parser p(expr);
  auto t = p.tree(n);
  p.finish();
  return t;
}

std::string mask_string(Mask mask) {
  std::string out;
  for (unsigned i = 0; i < 64; ++i) {
    if ((mask >> i) & 1u) {
      if (!out.empty()) out.push_back(',');
      out += std::to_string(i + 1);
    }
  }
  return out;
}

std::string tree_expression(const ParityDecisionTree& t) {
  std::string out;
  write_expression(t, 0, out);
  return out;
}

std::string to_text(const ParityDecisionTree& t) {
  return "n=" + std::to_string(t.arity()) + "\n" + tree_expression(t) + "\n";
}

EvalResult eval(const ParityDecisionTree& t, std::uint64_t x) {
  EvalResult r{1, {}};
  std::size_t id = 0;
  for (;;) {
    const auto& nd = t.node(id);
    if (nd.is_leaf()) {
      r.label = nd.label;
      return r;
    }
    const bool negative = chi_negative(nd.mask, x);
    r.leaf_id.push_back(negative ? '-' : '+');
    id = negative ? nd.neg : nd.pos;
  }
}

namespace {

int eval_label(const ParityDecisionTree& t, std::uint64_t x) {
  std::size_t id = 0;
  for (;;) {
    const auto& nd = t.node(id);
    if (nd.is_leaf()) return nd.label;
    id = chi_negative(nd.mask, x) ? nd.neg : nd.pos;
  }
}

}  // namespace

std::optional<std::uint64_t> find_disagreement(const ParityDecisionTree& t, const BooleanFunction& f) {
  if (t.arity() != f.arity()) throw std::invalid_argument("tree and function have different arity");
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    if (eval_label(t, x) != f.evaluate(x)) return x;
  }
  return std::nullopt;
}

bool computes(const ParityDecisionTree& t, const BooleanFunction& f) { return !find_disagreement(t, f); }

BooleanFunction induced_function(const ParityDecisionTree& t) {
  return BooleanFunction::from_predicate(t.arity(), [&](std::uint64_t x) { return eval_label(t, x) < 0; });
}

unsigned depth(const ParityDecisionTree& t) { return depth_from(t, 0); }

int LeafSummary::coordinate_sum() const { return std::accumulate(vector.begin(), vector.end(), 0); }

std::vector<LeafSummary> leaf_summaries(const ParityDecisionTree& t) {
  std::vector<LeafSummary> out;
  gf2::AffineSystem sys(t.arity());
  std::string path;
  collect_leaves(t, 0, sys, path, out);
  return out;
}

TreeMoments moments(const std::vector<LeafSummary>& leaves) {
  TreeMoments m;
  for (const auto& leaf : leaves) {
    m.depth = std::max(m.depth, leaf.path_length);
    if (!leaf.live()) continue;
    const int s = leaf.coordinate_sum();
    m.average_depth += leaf.mass * leaf.path_length;
    m.second_moment += leaf.mass * (s * s);
    m.first_abs_moment += leaf.mass * std::abs(s);
  }
  return m;
}

TreeMoments moments(const ParityDecisionTree& t) { return moments(leaf_summaries(t)); }

Rational average_depth(const ParityDecisionTree& t) { return moments(t).average_depth; }
Rational second_moment(const ParityDecisionTree& t) { return moments(t).second_moment; }
Rational first_abs_moment(const ParityDecisionTree& t) { return moments(t).first_abs_moment; }

std::optional<CorrelationWitness> find_correlation(const ParityDecisionTree& t) {
  for (const auto& leaf : leaf_summaries(t)) {
    if (leaf.live() && !leaf.summary.correlated_pairs.empty()) {
      return CorrelationWitness{leaf.leaf_id, leaf.summary.correlated_pairs.front()};
    }
  }
  return std::nullopt;
}

bool is_correlation_free(const ParityDecisionTree& t) { return !find_correlation(t); }

ParityDecisionTree refine_correlation_free(const ParityDecisionTree& t) {
  return refine_from(t, 0, gf2::AffineSystem(t.arity()));
}

ParityDecisionTree split_leaf(const ParityDecisionTree& t, std::string_view leaf_id, Mask mask) {
  if (mask == 0) throw std::invalid_argument("split mask must be nonempty");
  if ((mask & ~gf2::column_mask(t.arity())) != 0) throw std::invalid_argument("split mask outside [n]");
  bool found = false;
  std::string path;
  auto out = split_from(t, 0, path, leaf_id, mask, found);
  if (!found) throw std::invalid_argument("no leaf with id '" + std::string(leaf_id) + "'");
  return out;
}

}  // namespace bft
