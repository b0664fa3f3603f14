#include "spinsub/odometer.hpp"

#include <functional>
#include <limits>

namespace spinsub {

namespace {

bool is_zero(const IntVec& v) {
  for (auto x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace

OdometerPoint odometer_add(const DigitSystem& sys, const OdometerPoint& j, const IntVec& v) {
  OdometerPoint out;
  out.digits.resize(j.digits.size());
  IntVec carry = v;
  for (std::size_t l = 0; l < j.digits.size(); ++l) {
    auto [d, next] = sys.split(add(sys.digit(j.digits[l]), carry));
    out.digits[l] = d;
    carry = std::move(next);
  }
  return out;
}

CocycleValue spin_cocycle(const SpinSystem& sys, const IntVec& v, const OdometerPoint& j) {
  const auto& ds = sys.digits();
  const auto& g = sys.group();
  const int precision = j.precision();
  DigitString k(j.digits.size());
  IntVec carry = v;
  int depth = 0;
  while (!is_zero(carry)) {
    if (depth >= precision - 1) {
      throw Error(ErrorCode::InsufficientPrecision,
                  "insufficient precision: carry unresolved below level " + std::to_string(precision - 1));
    }
    auto [d, next] = ds.split(add(ds.digit(j.digits[depth]), carry));
    k[depth] = d;
    carry = std::move(next);
    ++depth;
  }
  if (depth == 0) return {0, 0};
  k[depth] = j.digits[depth];
  int spin = 0;
  for (int l = 0; l < depth; ++l) {
    const int from = sys.w_index(j.digits[l + 1], j.digits[l]);
    const int to = sys.w_index(k[l + 1], k[l]);
    spin = g.multiply_index(spin, g.multiply_index(g.inverse_index(from), to));
  }
  return {spin, depth};
}

SkewReport verify_skew_consistency(const SpinSystem& sys, int n, const std::vector<IntVec>& shifts) {
  SkewReport rep;
  rep.level = n;
  const auto sub = sys.as_substitution();
  const auto& ds = sys.digits();
  const auto dom = ds.digit_domain(n);
  const auto& g = sys.group();
  for (int d = 0; d < sys.digit_count(); ++d) {
    const int seed = sys.letter_index({0, d});
    const auto tile = supertile(sub, seed, n);
    const SpatialPatch patch(ds, tile);
    ++rep.seeds;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      const auto p = dom.at(i);
      OdometerPoint j{ds.index_string(i, n)};
      j.digits.push_back(d);
      const int here = sys.letter_at(tile.cells[i]).spin;
      for (const auto& v : shifts) {
        const int other = patch.at(add(p, v));
        if (other < 0) continue;
        ++rep.pairs;
        const auto phi = spin_cocycle(sys, v, j);
        if (g.multiply_index(phi.spin, here) != sys.letter_at(other).spin) ++rep.violations;
      }
    }
  }
  return rep;
}

Eigen::MatrixXd EigenvalueLattice::basis() const {
  Eigen::MatrixXd b(numerator.rows(), numerator.cols());
  for (int i = 0; i < numerator.rows(); ++i)
    for (int c = 0; c < numerator.cols(); ++c)
      b(i, c) = static_cast<double>(numerator(i, c)) / static_cast<double>(denominator);
  return b;
}

EigenvalueLattice odometer_eigenvalues(const DigitSystem& sys, int depth) {
  if (depth < 0) throw Error(ErrorCode::InvalidArgument, "depth must be nonnegative");
  EigenvalueLattice e;
  e.depth = depth;
  const int m = sys.dim();
  const IntMatrix adj_t = adjugate(sys.expansion().transpose());
  e.numerator = IntMatrix::identity(m);
  const auto limit = std::numeric_limits<std::int64_t>::max() / 2;
  for (int i = 0; i < depth; ++i) {
    const auto det = sys.det();
    if (std::abs(e.denominator) > limit / std::abs(det)) {
      throw Error(ErrorCode::InvalidArgument, "odometer depth too large for exact 64-bit arithmetic");
    }
    e.numerator = adj_t * e.numerator;
    e.denominator *= det;
  }
  if (e.denominator < 0) {
    e.denominator = -e.denominator;
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < m; ++c) e.numerator(i, c) = -e.numerator(i, c);
  }
  return e;
}

std::vector<IntVec> shifts_in_ball(int dim, int r) {
  std::vector<IntVec> out;
  IntVec v(static_cast<std::size_t>(dim), 0);
  std::function<void(int)> rec = [&](int c) {
    if (c == dim) {
      if (!is_zero(v)) out.push_back(v);
      return;
    }
    for (int t = -r; t <= r; ++t) {
      v[c] = t;
      rec(c + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<IntVec> axis_shifts(int dim) {
  std::vector<IntVec> out;
  for (int c = 0; c < dim; ++c)
    for (int s : {1, -1}) {
      IntVec v(static_cast<std::size_t>(dim), 0);
      v[c] = s;
      out.push_back(v);
    }
  return out;
}

}  // namespace spinsub
