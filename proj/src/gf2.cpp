#include "bft/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace bft::gf2 {

BitRow parse_row(std::string_view bits) {
  if (bits.size() > kMaxCols) throw std::invalid_argument("bit row longer than 64 columns");
  BitRow row = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] == '1') {
      row |= BitRow{1} << k;
    } else if (bits[k] != '0') {
      throw std::invalid_argument("bit row must contain only 0 and 1: " + std::string(bits));
    }
  }
  return row;
}

BitMatrix::BitMatrix(std::size_t cols) : cols_(cols) {
  if (cols > kMaxCols) throw std::invalid_argument("BitMatrix supports at most 64 columns");
}

BitMatrix::BitMatrix(std::size_t cols, std::vector<BitRow> rows) : BitMatrix(cols) {
  rows_.reserve(rows.size());
  for (BitRow r : rows) append(r);
}

void BitMatrix::append(BitRow row) {
  if ((row & ~column_mask(cols_)) != 0) {
    throw std::invalid_argument("row has entries beyond column " + std::to_string(cols_));
  }
  rows_.push_back(row);
}

void AffineSystem::add(BitRow row, bool rhs) {
  matrix_.append(row);
  rhs_.push_back(rhs);
}

BitRow ReducedSystem::pivot_columns() const {
  BitRow cols_mask = 0;
  for (const auto& p : pivots) cols_mask |= BitRow{1} << p.col;
  return cols_mask;
}

BitRow ReducedSystem::reduce(BitRow v, bool& rhs) const {
  for (const auto& p : pivots) {
    if ((v >> p.col) & 1u) {
      v ^= p.row;
      rhs ^= p.rhs;
    }
  }
  return v;
}

bool ReducedSystem::spans(BitRow v) const {
  bool unused = false;
  return reduce(v, unused) == 0;
}

ReducedSystem reduce(const AffineSystem& sys) {
  ReducedSystem out;
  out.cols = sys.cols();
  const auto rows = sys.matrix().data();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    bool b = sys.rhs()[r];
    const BitRow v = out.reduce(rows[r], b);
    if (v == 0) {
      if (b) out.consistent = false;
      continue;
    }
    const auto col = static_cast<std::size_t>(std::countr_zero(v));
    for (auto& p : out.pivots) {
      if ((p.row >> col) & 1u) {
        p.row ^= v;
        p.rhs ^= b;
      }
    }
    out.pivots.push_back({v, b, col});
  }
  std::sort(out.pivots.begin(), out.pivots.end(),
            [](const auto& a, const auto& b) { return a.col < b.col; });
  return out;
}

std::size_t rank(const BitMatrix& m) {
  AffineSystem sys(m.cols());
  for (BitRow r : m.data()) sys.add(r, false);
  return reduce(sys).rank();
}

bool in_row_space(const BitMatrix& m, BitRow v) {
  if ((v & ~column_mask(m.cols())) != 0) {
    throw std::invalid_argument("vector length does not match matrix columns");
  }
  AffineSystem sys(m.cols());
  for (BitRow r : m.data()) sys.add(r, false);
  return reduce(sys).spans(v);
}

SystemSummary analyze_reduced(const ReducedSystem& reduced) {
  SystemSummary s;
  s.consistent = reduced.consistent;
  s.rank = reduced.rank();

  // In reduced form e_i lies in the row space iff some pivot row equals e_i.
  for (const auto& p : reduced.pivots) {
    if (std::has_single_bit(p.row)) s.forced.emplace(p.col, p.rhs);
  }
  // Only columns touched by some pivot row can take part in a relation.
  BitRow support = 0;
  for (const auto& p : reduced.pivots) support |= p.row;
  for (const auto& [col, bit] : s.forced) support &= ~(BitRow{1} << col);
  for (std::size_t i = 0; i < reduced.cols; ++i) {
    if (!((support >> i) & 1u)) continue;
    for (std::size_t j = i + 1; j < reduced.cols; ++j) {
      if (!((support >> j) & 1u)) continue;
      if (reduced.spans((BitRow{1} << i) | (BitRow{1} << j))) s.correlated_pairs.emplace_back(i, j);
    }
  }
  return s;
}

SystemSummary analyze_system(const AffineSystem& sys) { return analyze_reduced(reduce(sys)); }

}  // namespace bft::gf2
