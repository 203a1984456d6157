#pragma once

// Boolean functions {-1,1}^n -> {-1,1} as packed truth tables.
//
// A point code b encodes x with bit (i-1) of b holding the GF(2) bit of x_i,
// where x_i = (-1)^bit. The table stores one bit per point: 1 means f = -1.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bft/numeric.hpp"

namespace bft {

inline constexpr unsigned kMaxArity = 27;
inline constexpr unsigned kDefaultTransformGuard = 24;

class BooleanFunction {
 public:
  /// Takes ownership of a packed table of 2^n bits (bit set = value -1).
  BooleanFunction(unsigned n, std::vector<std::uint64_t> words);

  /// Builds the table from `negative(point)`, true where f = -1.
  template <class Pred>
  static BooleanFunction from_predicate(unsigned n, Pred&& negative) {
    check_arity(n);
    std::vector<std::uint64_t> words(word_count(n), 0);
    const std::uint64_t points = std::uint64_t{1} << n;
    for (std::uint64_t x = 0; x < points; ++x) {
      if (negative(x)) words[x >> 6] |= std::uint64_t{1} << (x & 63);
    }
    return BooleanFunction(n, std::move(words));
  }

  unsigned arity() const { return n_; }
  std::uint64_t size() const { return std::uint64_t{1} << n_; }

  /// f(x) in {-1,+1}. Throws std::out_of_range if x >= 2^n.
  int evaluate(std::uint64_t x) const;
  bool is_negative(std::uint64_t x) const { return (words_[x >> 6] >> (x & 63)) & 1u; }

  std::uint64_t count_negative() const;
  bool is_constant() const;
  bool is_balanced() const { return 2 * count_negative() == size(); }

  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const BooleanFunction&, const BooleanFunction&) = default;

  static std::size_t word_count(unsigned n) { return n >= 6 ? std::size_t{1} << (n - 6) : 1; }
  static void check_arity(unsigned n);

 private:
  unsigned n_;
  std::vector<std::uint64_t> words_;
};

/// Integer-scaled Fourier spectrum: coef[S] = 2^n * f^(S), S a subset mask.
struct FourierSpectrum {
  unsigned n = 0;
  std::vector<std::int64_t> coef;

  Rational coefficient(std::uint64_t mask) const { return dyadic(coef.at(mask), n); }
  /// Sum of coef^2; equals 4^n for every Boolean function.
  boost::multiprecision::cpp_int parseval_mass() const;
  unsigned degree() const;
  Rational linear_sum() const;
};

/// In-place Walsh-Hadamard butterfly. Applying it twice multiplies by 2^n.
void walsh_hadamard(std::span<std::int64_t> values);

/// Full transform; rejects n above `guard`.
FourierSpectrum spectrum(const BooleanFunction& f, unsigned guard = kDefaultTransformGuard);

/// The truth table recovered from a spectrum (inverse transform).
BooleanFunction inverse_spectrum(const FourierSpectrum& s);

/// c_i = sum_x f(x) x_i = 2^n f^(i), streamed over the packed table.
std::vector<std::int64_t> linear_correlations(const BooleanFunction& f);
std::vector<Rational> linear_coefficients(const BooleanFunction& f);
Rational linear_sum(const BooleanFunction& f);

/// Pr[f = 1].
Rational mean_positive(const BooleanFunction& f);
/// 4 mu (1 - mu).
Rational variance(const BooleanFunction& f);

unsigned fourier_degree(const BooleanFunction& f, unsigned guard = kDefaultTransformGuard);

/// (f o g)(x) = f(g(block 1), ..., g(block m)); block i covers coordinates
/// (i-1)n+1 .. in of the result.
BooleanFunction compose(const BooleanFunction& f, const BooleanFunction& g);
BooleanFunction power(const BooleanFunction& f, unsigned k);

BooleanFunction maj3();
BooleanFunction recursive_majority(unsigned k);
BooleanFunction parity(unsigned n);
/// x_i, with i 1-based.
BooleanFunction dictator(unsigned n, unsigned i);
BooleanFunction constant(unsigned n, int sign);

/// Named builders: maj3, recmaj(k), parity(n), dictator(n, i), constant(n, sign).
BooleanFunction builtin(std::string_view name, std::span<const int> params);
/// Colon-separated form used on the command line: "maj3", "parity:5",
/// "dictator:3:1", "recmaj:2", "constant:2:-1".
BooleanFunction builtin(std::string_view spec);

/// Truth-table text: "n=<int>" then 2^n characters from {+,-}.
BooleanFunction parse_truth_table(std::string_view text);
std::string to_text(const BooleanFunction& f);

}  // namespace bft
