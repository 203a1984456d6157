#include "bft/boolfn.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace bft {

namespace {

// Positions p in a 64-bit word whose bit i (i < 6) is set.
constexpr std::uint64_t kLowBitPattern[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

std::uint64_t table_mask(unsigned n) {
  return n >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad integer for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

void BooleanFunction::check_arity(unsigned n) {
  if (n < 1 || n > kMaxArity) {
    throw std::invalid_argument("arity must be in [1, " + std::to_string(kMaxArity) + "], got " +
                                std::to_string(n));
  }
}

BooleanFunction::BooleanFunction(unsigned n, std::vector<std::uint64_t> words)
    : n_(n), words_(std::move(words)) {
  check_arity(n);
  if (words_.size() != word_count(n)) throw std::invalid_argument("truth table has wrong length");
  if ((words_[0] & ~table_mask(n)) != 0) throw std::invalid_argument("truth table has bits past 2^n");
}

int BooleanFunction::evaluate(std::uint64_t x) const {
  if (x >= size()) throw std::out_of_range("point code " + std::to_string(x) + " out of range");
  return is_negative(x) ? -1 : 1;
}

std::uint64_t BooleanFunction::count_negative() const {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

bool BooleanFunction::is_constant() const {
  const auto neg = count_negative();
  return neg == 0 || neg == size();
}

boost::multiprecision::cpp_int FourierSpectrum::parseval_mass() const {
  boost::multiprecision::cpp_int total = 0;
  for (auto c : coef) total += boost::multiprecision::cpp_int(c) * c;
  return total;
}

unsigned FourierSpectrum::degree() const {
  unsigned d = 0;
  for (std::uint64_t s = 0; s < coef.size(); ++s) {
    if (coef[s] != 0) d = std::max(d, static_cast<unsigned>(std::popcount(s)));
  }
  return d;
}

Rational FourierSpectrum::linear_sum() const {
  std::int64_t total = 0;
  for (unsigned i = 0; i < n; ++i) total += coef[std::uint64_t{1} << i];
  return dyadic(total, n);
}

void walsh_hadamard(std::span<std::int64_t> values) {
  const std::size_t len = values.size();
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t base = 0; base < len; base += 2 * h) {
      for (std::size_t j = base; j < base + h; ++j) {
        const std::int64_t a = values[j];
        const std::int64_t b = values[j + h];
        values[j] = a + b;
        values[j + h] = a - b;
      }
    }
  }
}

FourierSpectrum spectrum(const BooleanFunction& f, unsigned guard) {
  if (f.arity() > guard) {
    throw std::invalid_argument("arity " + std::to_string(f.arity()) +
                                " exceeds the full-transform guard " + std::to_string(guard) +
                                "; use linear_coefficients for level-1 coefficients");
  }
  FourierSpectrum s;
  s.n = f.arity();
  s.coef.resize(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) s.coef[x] = f.is_negative(x) ? -1 : 1;
  walsh_hadamard(s.coef);
  return s;
}

BooleanFunction inverse_spectrum(const FourierSpectrum& s) {
  std::vector<std::int64_t> values = s.coef;
  walsh_hadamard(values);
  const std::int64_t scale = std::int64_t{1} << s.n;
  return BooleanFunction::from_predicate(s.n, [&](std::uint64_t x) {
    if (values[x] != scale && values[x] != -scale) {
      throw std::invalid_argument("spectrum is not that of a Boolean function");
    }
    return values[x] < 0;
  });
}

std::vector<std::int64_t> linear_correlations(const BooleanFunction& f) {
  // sum_x f(x) x_i = 4 P_i - 2 A, with A = #{f = -1} and P_i = #{f = -1, bit_i = 1}.
  const unsigned n = f.arity();
  const auto words = f.words();
  std::vector<std::int64_t> hits(n, 0);
  std::int64_t negatives = 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::uint64_t word = words[w];
    if (word == 0) continue;
    const auto pop = std::popcount(word);
    negatives += pop;
    for (unsigned i = 0; i < std::min(n, 6u); ++i) hits[i] += std::popcount(word & kLowBitPattern[i]);
    for (unsigned i = 6; i < n; ++i) {
      if ((w >> (i - 6)) & 1u) hits[i] += pop;
    }
  }
  std::vector<std::int64_t> c(n);
  for (unsigned i = 0; i < n; ++i) c[i] = 4 * hits[i] - 2 * negatives;
  return c;
}

std::vector<Rational> linear_coefficients(const BooleanFunction& f) {
  std::vector<Rational> out;
  for (auto c : linear_correlations(f)) out.push_back(dyadic(c, f.arity()));
  return out;
}

Rational linear_sum(const BooleanFunction& f) {
  std::int64_t total = 0;
  for (auto c : linear_correlations(f)) total += c;
  return dyadic(total, f.arity());
}

Rational mean_positive(const BooleanFunction& f) {
  return dyadic(static_cast<std::int64_t>(f.size() - f.count_negative()), f.arity());
}

Rational variance(const BooleanFunction& f) {
  const Rational mu = mean_positive(f);
  return 4 * mu * (1 - mu);
}

unsigned fourier_degree(const BooleanFunction& f, unsigned guard) { return spectrum(f, guard).degree(); }

BooleanFunction compose(const BooleanFunction& f, const BooleanFunction& g) {
  const unsigned m = f.arity();
  const unsigned n = g.arity();
  if (m * n > kMaxArity) {
    throw std::invalid_argument("composition arity " + std::to_string(m * n) + " exceeds maximum " +
                                std::to_string(kMaxArity));
  }
  const std::uint64_t block = (std::uint64_t{1} << n) - 1;
  return BooleanFunction::from_predicate(m * n, [&](std::uint64_t x) {
    std::uint64_t outer = 0;
    for (unsigned i = 0; i < m; ++i) {
      if (g.is_negative((x >> (i * n)) & block)) outer |= std::uint64_t{1} << i;
    }
    return f.is_negative(outer);
  });
}

BooleanFunction power(const BooleanFunction& f, unsigned k) {
  if (k == 0) throw std::invalid_argument("power requires k >= 1");
  std::uint64_t arity = 1;
  for (unsigned j = 0; j < k; ++j) {
    arity *= f.arity();
    if (arity > kMaxArity) {
      throw std::invalid_argument("power arity exceeds maximum " + std::to_string(kMaxArity));
    }
  }
  BooleanFunction result = f;
  for (unsigned j = 1; j < k; ++j) result = compose(f, result);
  return result;
}

BooleanFunction maj3() {
  // -1 exactly when at least two of the three inputs are -1.
  return BooleanFunction::from_predicate(3, [](std::uint64_t x) { return std::popcount(x) >= 2; });
}

BooleanFunction recursive_majority(unsigned k) { return power(maj3(), k); }

BooleanFunction parity(unsigned n) {
  return BooleanFunction::from_predicate(n, [](std::uint64_t x) { return std::popcount(x) % 2 == 1; });
}

BooleanFunction dictator(unsigned n, unsigned i) {
  if (i < 1 || i > n) throw std::invalid_argument("dictator index out of range");
  return BooleanFunction::from_predicate(n, [i](std::uint64_t x) { return (x >> (i - 1)) & 1u; });
}

BooleanFunction constant(unsigned n, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("constant sign must be +1 or -1");
  return BooleanFunction::from_predicate(n, [sign](std::uint64_t) { return sign < 0; });
}

BooleanFunction builtin(std::string_view name, std::span<const int> params) {
  auto expect = [&](std::size_t count) {
    if (params.size() != count) {
      throw std::invalid_argument("builtin '" + std::string(name) + "' takes " + std::to_string(count) +
                                  " parameter(s)");
    }
    for (int p : params) {
      if (p < 0) throw std::invalid_argument("builtin parameters must be non-negative");
    }
  };
  auto u = [&](std::size_t k) { return static_cast<unsigned>(params[k]); };
  if (name == "maj3") {
    expect(0);
    return maj3();
  }
  if (name == "recmaj" || name == "recursive_majority") {
    expect(1);
    return recursive_majority(u(0));
  }
  if (name == "parity") {
    expect(1);
    return parity(u(0));
  }
  if (name == "dictator") {
    expect(2);
    return dictator(u(0), u(1));
  }
  if (name == "constant") {
    if (params.size() != 2 || params[0] < 0) throw std::invalid_argument("builtin 'constant' takes n and sign");
    return constant(u(0), params[1]);
  }
  throw std::invalid_argument("unknown builtin function '" + std::string(name) + "'");
}

BooleanFunction builtin(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  std::vector<int> params;
  for (std::size_t k = 1; k < parts.size(); ++k) {
    std::string_view p = parts[k];
    if (p == "+") {
      params.push_back(1);
    } else if (p == "-") {
      params.push_back(-1);
    } else {
      if (!p.empty() && p.front() == '+') p.remove_prefix(1);
      params.push_back(parse_int(p, parts[0]));
    }
  }
  return builtin(parts[0], params);
}

BooleanFunction parse_truth_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header, table, extra;
  if (!(in >> header) || header.rfind("n=", 0) != 0) {
    throw std::invalid_argument("truth table must start with 'n=<int>'");
  }
  const int n = parse_int(std::string_view(header).substr(2), "n");
  if (n < 1 || n > static_cast<int>(kMaxArity)) throw std::invalid_argument("arity out of range: " + header);
  if (!(in >> table)) throw std::invalid_argument("missing truth table line");
  if (in >> extra) throw std::invalid_argument("unexpected trailing content after truth table");
  const std::uint64_t points = std::uint64_t{1} << n;
  if (table.size() != points) {
    throw std::invalid_argument("truth table has " + std::to_string(table.size()) + " entries, expected " +
                                std::to_string(points));
  }
  for (std::size_t k = 0; k < table.size(); ++k) {
    if (table[k] != '+' && table[k] != '-') {
      throw std::invalid_argument("invalid character '" + std::string(1, table[k]) + "' at position " +
                                  std::to_string(k));
    }
  }
  return BooleanFunction::from_predicate(static_cast<unsigned>(n),
                                         [&](std::uint64_t x) { return table[x] == '-'; });
}

std::string to_text(const BooleanFunction& f) {
  std::string out = "n=" + std::to_string(f.arity()) + "\n";
  out.reserve(out.size() + f.size() + 1);
  for (std::uint64_t x = 0; x < f.size(); ++x) out.push_back(f.is_negative(x) ? '-' : '+');
  out.push_back('\n');
  return out;
}

}  // namespace bft
