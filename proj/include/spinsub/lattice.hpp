#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinsub/error.hpp"

namespace spinsub {

using IntVec = std::vector<std::int64_t>;

/// Digit indices, least significant level first: (j^(0), ..., j^(M-1)).
using DigitString = std::vector<int>;

inline constexpr std::size_t kDefaultMaxCells = 10'000'000;

struct IntVecHash {
  std::size_t operator()(const IntVec& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {}
  IntMatrix(int rows, int cols, std::vector<std::int64_t> row_major);

  static IntMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  std::int64_t& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  std::int64_t operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const std::vector<std::int64_t>& data() const { return data_; }

  IntMatrix transpose() const;
  IntMatrix operator*(const IntMatrix& other) const;
  IntVec operator*(const IntVec& v) const;
  bool operator==(const IntMatrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// Exact determinant by fraction-free elimination.
std::int64_t determinant(const IntMatrix& a);
/// adj(A) with A * adj(A) = det(A) I.
IntMatrix adjugate(const IntMatrix& a);

IntVec add(const IntVec& a, const IntVec& b);
IntVec sub(const IntVec& a, const IntVec& b);
std::string to_string(const IntVec& v);

struct ValidationResult {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks that (Q, D) is a digit system: Q square, non-singular and expanding,
/// and D a complete set of residues of Z^m / Q Z^m.
ValidationResult validate_digit_system(const IntMatrix& q, const std::vector<IntVec>& digits);

class DigitDomain;

/// A validated digit system (Q, D). Digit order is the configured order and
/// every matrix indexed by digits uses it.
class DigitSystem {
 public:
  /// Throws Error on any violation reported by validate_digit_system.
  static DigitSystem create(IntMatrix q, std::vector<IntVec> digits, std::size_t max_cells = kDefaultMaxCells);

  int dim() const { return q_.rows(); }
  int size() const { return static_cast<int>(digits_.size()); }
  const IntMatrix& expansion() const { return q_; }
  const std::vector<IntVec>& digits() const { return digits_; }
  const IntVec& digit(int i) const { return digits_[static_cast<std::size_t>(i)]; }
  std::int64_t det() const { return det_; }

  std::size_t max_cells() const { return max_cells_; }
  void set_max_cells(std::size_t cap) { max_cells_ = cap; }
  /// L^n, or Error(DomainTooLarge) when it exceeds the cell cap.
  std::size_t checked_count(int n) const;

  /// Index of the digit congruent to x modulo Q Z^m.
  int residue_index(const IntVec& x) const;
  /// Unique (d, y) with x = digits[d] + Q y.
  std::pair<int, IntVec> split(const IntVec& x) const;

  /// (Q,D)-adic expansion of x truncated to `levels` digits.
  DigitString expand_point(const IntVec& x, int levels) const;
  /// Sum_l Q^l digits[s_l].
  IntVec evaluate(const DigitString& s) const;
  /// Canonical enumeration of D^(n).
  DigitDomain digit_domain(int n) const;

  /// Index of a digit string in mixed-radix order (least significant first).
  std::size_t string_index(const DigitString& s) const;
  DigitString index_string(std::size_t index, int levels) const;

 private:
  DigitSystem() = default;
  IntVec residue_key(const IntVec& x) const;

  IntMatrix q_;
  IntMatrix adj_;
  std::int64_t det_ = 0;
  std::vector<IntVec> digits_;
  std::vector<std::pair<IntVec, int>> residues_;  // sorted by key
  std::size_t max_cells_ = kDefaultMaxCells;
};

/// D^(n) = Q D^(n-1) + D, points stored in mixed-radix order of digit strings.
class DigitDomain {
 public:
  DigitDomain(int level, int dim, std::vector<std::int64_t> coords)
      : level_(level), dim_(dim), coords_(std::move(coords)) {}

  int level() const { return level_; }
  int dim() const { return dim_; }
  std::size_t size() const { return coords_.size() / static_cast<std::size_t>(dim_); }
  std::span<const std::int64_t> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  IntVec at(std::size_t i) const {
    auto p = point(i);
    return {p.begin(), p.end()};
  }
  const std::vector<std::int64_t>& coords() const { return coords_; }

  /// Axis-aligned bounding box, lo and hi inclusive.
  std::pair<IntVec, IntVec> bounds() const;

 private:
  int level_;
  int dim_;
  std::vector<std::int64_t> coords_;
};

/// Occupancy raster of the digit-tile approximation Q^{-k} D^(k).
struct TileRaster {
  int level = 0;
  double resolution = 0;             // cells per unit length
  std::vector<int> shape;            // grid extent per axis (empty when m > 2)
  std::vector<double> origin;        // lower corner of the grid
  std::vector<std::uint32_t> counts;  // points per raster cell, row-major (y outer)
  double occupancy_measure = 0;      // distinct occupied raster cells x cell volume
  double measure_estimate = 0;       // density estimate on the Q^{-j} lattice frame
  int frame_level = 0;               // j used for the density estimate
  double previous_estimate = 0;      // same estimator at level k-1
  double tolerance = 0.05;
  bool unit_verdict = false;         // both estimates within tolerance of 1

  bool occupied(std::size_t cell) const { return counts[cell] != 0; }
};

/// Density-based Lebesgue measure estimate of the digit tile at approximation
/// level k: |det Q|^(k-j) divided by the modal number of points per cell of
/// the lattice Q^{-j} Z^m.
double tile_measure_estimate(const DigitSystem& sys, int k, int* frame_level = nullptr);

/// Rasterizes Q^{-k} D^(k). Grids are produced for m <= 2; higher dimensions
/// get the measure estimate only. Throws DomainTooLarge when the grid would
/// exceed the system's cell cap.
TileRaster raster_digit_tile(const DigitSystem& sys, int k, double resolution, double tolerance = 0.05);

}  // namespace spinsub
