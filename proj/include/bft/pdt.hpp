#pragma once

// Parity decision trees over {-1,1}^n.
//
// Internal nodes query chi_S(x) = prod_{i in S} x_i for a nonempty mask S and
// follow the +1 or -1 edge; leaves carry a sign. Leaves are identified by the
// string of edge signs from the root ("" for a single-leaf tree).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bft/boolfn.hpp"
#include "bft/gf2.hpp"
#include "bft/numeric.hpp"

namespace bft {

using Mask = std::uint64_t;

inline constexpr unsigned kMaxTreeArity = 64;

class ParityDecisionTree {
 public:
  struct Node {
    Mask mask = 0;  // 0 marks a leaf
    int label = 1;  // leaves only
    std::size_t pos = 0;
    std::size_t neg = 0;

    bool is_leaf() const { return mask == 0; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  static ParityDecisionTree leaf(unsigned n, int label);
  static ParityDecisionTree query(Mask mask, const ParityDecisionTree& pos, const ParityDecisionTree& neg);

  unsigned arity() const { return n_; }
  const Node& root() const { return nodes_[0]; }
  const Node& node(std::size_t id) const { return nodes_.at(id); }
  std::size_t node_count() const { return nodes_.size(); }

  friend bool operator==(const ParityDecisionTree&, const ParityDecisionTree&) = default;

 private:
  ParityDecisionTree(unsigned n, std::vector<Node> nodes) : n_(n), nodes_(std::move(nodes)) {}

  unsigned n_ = 1;
  std::vector<Node> nodes_;  // preorder, nodes_[0] is the root
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses "n=<int>" followed by a tree expression.
ParityDecisionTree parse_tree(std::string_view text);
/// Parses a bare tree expression over arity n.
ParityDecisionTree parse_tree(unsigned n, std::string_view expr);
/// Canonical expression, masks as sorted 1-based index lists.
std::string tree_expression(const ParityDecisionTree& t);
/// Header line plus expression.
std::string to_text(const ParityDecisionTree& t);

/// 1-based index list "1,2" for a mask.
std::string mask_string(Mask mask);

struct EvalResult {
  int label;
  std::string leaf_id;
};

EvalResult eval(const ParityDecisionTree& t, std::uint64_t x);

/// The first point where t's output differs from f, if any.
std::optional<std::uint64_t> find_disagreement(const ParityDecisionTree& t, const BooleanFunction& f);
bool computes(const ParityDecisionTree& t, const BooleanFunction& f);
/// The function whose value at x is the label of the leaf x reaches.
BooleanFunction induced_function(const ParityDecisionTree& t);

unsigned depth(const ParityDecisionTree& t);

struct LeafSummary {
  std::string leaf_id;
  int label = 1;
  gf2::AffineSystem system{1};
  gf2::SystemSummary summary;
  Rational mass;
  /// Leaf vector: (-1)^(forced bit) on forced coordinates, 0 elsewhere.
  std::vector<int> vector;
  unsigned path_length = 0;

  bool live() const { return summary.consistent; }
  int coordinate_sum() const;
};

/// Leaves in depth-first order, +1 edge first.
std::vector<LeafSummary> leaf_summaries(const ParityDecisionTree& t);

Rational average_depth(const ParityDecisionTree& t);
/// E over leaves of (sum_i l_i)^2, weighted by leaf mass.
Rational second_moment(const ParityDecisionTree& t);
/// E over leaves of |sum_i l_i|.
Rational first_abs_moment(const ParityDecisionTree& t);

struct TreeMoments {
  unsigned depth = 0;
  Rational average_depth;
  Rational second_moment;
  Rational first_abs_moment;
};

TreeMoments moments(const std::vector<LeafSummary>& leaves);
TreeMoments moments(const ParityDecisionTree& t);

struct CorrelationWitness {
  std::string leaf_id;
  std::pair<std::size_t, std::size_t> pair;  // 0-indexed
};

/// Empty when every live leaf has no correlated pair; otherwise the first
/// offending leaf and pair.
std::optional<CorrelationWitness> find_correlation(const ParityDecisionTree& t);
bool is_correlation_free(const ParityDecisionTree& t);

/// Extends every leaf with single-coordinate queries until no live leaf has a
/// correlated pair. The result induces the same function, has t as a prefix,
/// and has depth at most 2 depth(t).
ParityDecisionTree refine_correlation_free(const ParityDecisionTree& t);

/// Replaces leaf `leaf_id` by a query on `mask` whose children both keep the
/// old label.
ParityDecisionTree split_leaf(const ParityDecisionTree& t, std::string_view leaf_id, Mask mask);

}  // namespace bft
