#pragma once

#include <cstdint>
#include <random>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace bft {

using Rational = boost::multiprecision::cpp_rational;
using HighPrecision = boost::multiprecision::cpp_bin_float_50;

/// num / 2^exp as an exact rational.
Rational dyadic(std::int64_t num, unsigned exp);

double to_double(const Rational& q);
HighPrecision to_high_precision(const Rational& q);

/// "p/q", or "p" when the denominator is 1.
std::string format_rational(const Rational& q);

/// Fixed 12 significant digits, the report format for irrational values.
std::string format_real(double x);

/// Seeded generator used by every random suite.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the C++
/// standard). Bounded draws use rejection sampling on the raw 64-bit output
/// instead of std::uniform_int_distribution, whose algorithm is
/// implementation-defined, so sequences reproduce across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  bool coin() { return (next() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bft
