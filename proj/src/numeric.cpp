#include "bft/numeric.hpp"

#include <cstdio>

namespace bft {

Rational dyadic(std::int64_t num, unsigned exp) {
  boost::multiprecision::cpp_int den = 1;
  den <<= exp;
  return Rational(boost::multiprecision::cpp_int(num), den);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

HighPrecision to_high_precision(const Rational& q) {
  return HighPrecision(numerator(q)) / HighPrecision(denominator(q));
}

std::string format_rational(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Largest multiple of bound that fits; draws at or above it are rejected.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  for (;;) {
    const std::uint64_t r = next();
    if (r < limit) return r % bound;
  }
}

}  // namespace bft
