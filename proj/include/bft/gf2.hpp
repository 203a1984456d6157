#pragma once

// Linear algebra over GF(2) on bit-packed rows.
//
// A row is a std::uint64_t whose bit c is the entry in column c, so matrices
// have at most 64 columns. Column c is coordinate c+1 of the ambient space.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace bft::gf2 {

using BitRow = std::uint64_t;

inline constexpr std::size_t kMaxCols = 64;

/// Mask with the low `cols` bits set.
constexpr BitRow column_mask(std::size_t cols) {
  return cols >= 64 ? ~BitRow{0} : (BitRow{1} << cols) - 1;
}

/// Parses "0110"-style text; character k is column k.
BitRow parse_row(std::string_view bits);

class BitMatrix {
 public:
  explicit BitMatrix(std::size_t cols);
  BitMatrix(std::size_t cols, std::vector<BitRow> rows);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  BitRow row(std::size_t r) const { return rows_.at(r); }
  bool at(std::size_t r, std::size_t c) const { return (row(r) >> c) & 1u; }
  std::span<const BitRow> data() const { return rows_; }

  /// Throws std::invalid_argument if `row` has bits outside the column range.
  void append(BitRow row);

 private:
  std::size_t cols_;
  std::vector<BitRow> rows_;
};

std::size_t rank(const BitMatrix& m);

/// True iff v is a GF(2) combination of the rows of m. Bits of v beyond
/// m.cols() are a dimension mismatch and throw std::invalid_argument.
bool in_row_space(const BitMatrix& m, BitRow v);

/// Constraints <row, x> = rhs over GF(2), one per query on a tree path.
class AffineSystem {
 public:
  explicit AffineSystem(std::size_t cols) : matrix_(cols) {}

  void add(BitRow row, bool rhs);

  const BitMatrix& matrix() const { return matrix_; }
  const std::vector<bool>& rhs() const { return rhs_; }
  std::size_t cols() const { return matrix_.cols(); }
  std::size_t size() const { return rhs_.size(); }

 private:
  BitMatrix matrix_;
  std::vector<bool> rhs_;
};

/// Reduced row echelon form of an augmented system.
///
/// Each pivot row has a 1 in its own pivot column and 0 in every other pivot
/// column. Pivots are sorted by column.
struct ReducedSystem {
  struct Pivot {
    BitRow row;
    bool rhs;
    std::size_t col;
  };

  std::size_t cols = 0;
  bool consistent = true;
  std::vector<Pivot> pivots;

  std::size_t rank() const { return pivots.size(); }
  BitRow pivot_columns() const;

  /// Residue of v after elimination against the pivots (0 iff v is in the
  /// row space); `rhs` is updated alongside.
  BitRow reduce(BitRow v, bool& rhs) const;
  bool spans(BitRow v) const;
};

ReducedSystem reduce(const AffineSystem& sys);

struct SystemSummary {
  bool consistent = true;
  std::size_t rank = 0;
  /// 0-indexed coordinate -> forced GF(2) bit.
  std::map<std::size_t, bool> forced;
  /// Pairs i < j with e_i + e_j in the row space and neither coordinate forced.
  std::vector<std::pair<std::size_t, std::size_t>> correlated_pairs;
};

SystemSummary analyze_system(const AffineSystem& sys);
SystemSummary analyze_reduced(const ReducedSystem& reduced);

}  // namespace bft::gf2
