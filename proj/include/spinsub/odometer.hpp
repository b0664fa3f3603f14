#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinsub/lattice.hpp"
#include "spinsub/substitution.hpp"

namespace spinsub {

/// Point of the digit odometer truncated to precision digits.size(); all
/// arithmetic is modulo Q^M Z^m.
struct OdometerPoint {
  DigitString digits;
  int precision() const { return static_cast<int>(digits.size()); }
  bool operator==(const OdometerPoint&) const = default;
};

/// j + v, computed digitwise with a lattice-valued carry.
OdometerPoint odometer_add(const DigitSystem& sys, const OdometerPoint& j, const IntVec& v);

struct CocycleValue {
  int spin = 0;   // element index in the spin group
  int depth = 0;  // carry depth: j and j+v agree from this level on
};

/// phi(v, j). Throws InsufficientPrecision unless the carry dies at a level
/// strictly below j's precision, since the top factor reads one level above it.
CocycleValue spin_cocycle(const SpinSystem& sys, const IntVec& v, const OdometerPoint& j);

struct SkewReport {
  int level = 0;
  std::size_t pairs = 0;
  std::size_t violations = 0;
  std::size_t seeds = 0;
};

/// For each spin-free seed d and each v, compares spin(S^n(d) at p+v) with
/// phi(v, p) spin(S^n(d) at p) over all p with p, p+v in D^(n).
SkewReport verify_skew_consistency(const SpinSystem& sys, int n, const std::vector<IntVec>& shifts);

/// Generators of E_O up to depth i: the columns of (Q^T)^{-i} = numerator / denominator.
struct EigenvalueLattice {
  int depth = 0;
  IntMatrix numerator;
  std::int64_t denominator = 1;
  Eigen::MatrixXd basis() const;
};

EigenvalueLattice odometer_eigenvalues(const DigitSystem& sys, int depth);

/// All v with 0 < |v|_inf <= r.
std::vector<IntVec> shifts_in_ball(int dim, int r);
/// +-e_c for every axis c.
std::vector<IntVec> axis_shifts(int dim);

}  // namespace spinsub
