#include "spinsub/lattice.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

namespace spinsub {

IntMatrix::IntMatrix(int rows, int cols, std::vector<std::int64_t> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorCode::InvalidArgument, "matrix data does not match its shape");
  }
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
  IntMatrix r(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const auto a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < other.cols_; ++j) r(i, j) += a * other(k, j);
    }
  return r;
}

IntVec IntMatrix::operator*(const IntVec& v) const {
  IntVec r(static_cast<std::size_t>(rows_), 0);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

std::int64_t determinant(const IntMatrix& a) {
  const int n = a.rows();
  if (n == 0) return 1;
  // Bareiss: every intermediate division is exact.
  std::vector<std::int64_t> m = a.data();
  auto at = [&](int i, int j) -> std::int64_t& { return m[static_cast<std::size_t>(i) * n + j]; };
  std::int64_t sign = 1;
  std::int64_t prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int p = k + 1;
      while (p < n && at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

IntMatrix adjugate(const IntMatrix& a) {
  const int n = a.rows();
  IntMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = a(r, c);
        }
        ++rr;
      }
      adj(i, j) = ((i + j) % 2 == 0 ? 1 : -1) * determinant(minor);
    }
  return adj;
}

IntVec add(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

IntVec sub(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

std::string to_string(const IntVec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t n) {
  const auto r = a % n;
  return r < 0 ? r + n : r;
}

IntVec key_of(const IntMatrix& adj, std::int64_t modulus, const IntVec& x) {
  IntVec k = adj * x;
  for (auto& c : k) c = floor_mod(c, modulus);
  return k;
}

}  // namespace

ValidationResult validate_digit_system(const IntMatrix& q, const std::vector<IntVec>& digits) {
  ValidationResult res;
  auto fail = [&](std::string msg) {
    res.ok = false;
    res.violations.push_back(std::move(msg));
  };
  if (!q.square() || q.rows() == 0) {
    fail("expansion matrix must be square and nonempty");
    return res;
  }
  const int m = q.rows();
  if (digits.empty()) {
    fail("digit set is empty");
    return res;
  }
  for (const auto& d : digits) {
    if (static_cast<int>(d.size()) != m) {
      fail("digit " + to_string(d) + " has wrong dimension");
      return res;
    }
  }
  const auto det = determinant(q);
  if (det == 0) {
    fail("degenerate expansion: det Q = 0");
    return res;
  }
  Eigen::MatrixXd qd(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) qd(i, j) = static_cast<double>(q(i, j));
  Eigen::EigenSolver<Eigen::MatrixXd> es(qd, false);
  for (int i = 0; i < m; ++i) {
    const auto lam = es.eigenvalues()[i];
    if (std::abs(lam) <= 1.0 + 1e-9) {
      std::ostringstream os;
      os << "not expansive: eigenvalue " << lam.real() << (lam.imag() < 0 ? "-" : "+") << std::abs(lam.imag())
         << "i has modulus " << std::abs(lam);
      fail(os.str());
    }
  }
  const auto adet = det < 0 ? -det : det;
  if (static_cast<std::int64_t>(digits.size()) != adet) {
    fail("digit count " + std::to_string(digits.size()) + " differs from |det Q| = " + std::to_string(adet));
  }
  const IntMatrix adj = adjugate(q);
  std::map<IntVec, std::size_t> seen;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    auto [it, inserted] = seen.emplace(key_of(adj, adet, digits[i]), i);
    if (!inserted) {
      const auto j = it->second;
      fail("digits " + std::to_string(j) + " and " + std::to_string(i) + ": " + to_string(digits[j]) + " - " +
           to_string(digits[i]) + " lies in Q Z^m");
    }
  }
  return res;
}

DigitSystem DigitSystem::create(IntMatrix q, std::vector<IntVec> digits, std::size_t max_cells) {
  const auto v = validate_digit_system(q, digits);
  if (!v.ok) {
    const auto& first = v.violations.front();
    ErrorCode code = ErrorCode::InvalidDigitSet;
    if (first.rfind("degenerate", 0) == 0) code = ErrorCode::DegenerateExpansion;
    if (first.rfind("not expansive", 0) == 0) code = ErrorCode::NotExpansive;
    std::string msg = "invalid digit system: ";
    for (std::size_t i = 0; i < v.violations.size(); ++i) msg += (i ? "; " : "") + v.violations[i];
    throw Error(code, msg);
  }
  DigitSystem s;
  s.q_ = std::move(q);
  s.adj_ = adjugate(s.q_);
  s.det_ = determinant(s.q_);
  s.digits_ = std::move(digits);
  s.max_cells_ = max_cells;
  const auto adet = s.det_ < 0 ? -s.det_ : s.det_;
  for (int i = 0; i < s.size(); ++i) s.residues_.emplace_back(key_of(s.adj_, adet, s.digits_[i]), i);
  std::sort(s.residues_.begin(), s.residues_.end());
  return s;
}

std::size_t DigitSystem::checked_count(int n) const {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "level must be nonnegative");
  std::size_t count = 1;
  for (int i = 0; i < n; ++i) {
    count *= static_cast<std::size_t>(size());
    if (count > max_cells_) {
      throw Error(ErrorCode::DomainTooLarge, "domain too large: " + std::to_string(size()) + "^" + std::to_string(n) +
                                                 " cells exceeds the cap of " + std::to_string(max_cells_) +
                                                 "; lower the level or raise caps.max_cells");
    }
  }
  return count;
}

IntVec DigitSystem::residue_key(const IntVec& x) const {
  return key_of(adj_, det_ < 0 ? -det_ : det_, x);
}

int DigitSystem::residue_index(const IntVec& x) const {
  const auto key = residue_key(x);
  auto it = std::lower_bound(residues_.begin(), residues_.end(), key,
                             [](const auto& entry, const IntVec& k) { return entry.first < k; });
  return it->second;
}

std::pair<int, IntVec> DigitSystem::split(const IntVec& x) const {
  const int d = residue_index(x);
  IntVec y = adj_ * sub(x, digits_[d]);
  for (auto& c : y) c /= det_;
  return {d, std::move(y)};
}

DigitString DigitSystem::expand_point(const IntVec& x, int levels) const {
  DigitString s;
  s.reserve(static_cast<std::size_t>(std::max(levels, 0)));
  IntVec cur = x;
  for (int l = 0; l < levels; ++l) {
    auto [d, y] = split(cur);
    s.push_back(d);
    cur = std::move(y);
  }
  return s;
}

IntVec DigitSystem::evaluate(const DigitString& s) const {
  IntVec acc(static_cast<std::size_t>(dim()), 0);
  for (auto it = s.rbegin(); it != s.rend(); ++it) acc = add(q_ * acc, digits_[*it]);
  return acc;
}

std::size_t DigitSystem::string_index(const DigitString& s) const {
  std::size_t idx = 0;
  for (auto it = s.rbegin(); it != s.rend(); ++it) idx = idx * static_cast<std::size_t>(size()) + *it;
  return idx;
}

DigitString DigitSystem::index_string(std::size_t index, int levels) const {
  DigitString s(static_cast<std::size_t>(levels));
  for (int l = 0; l < levels; ++l) {
    s[l] = static_cast<int>(index % static_cast<std::size_t>(size()));
    index /= static_cast<std::size_t>(size());
  }
  return s;
}

DigitDomain DigitSystem::digit_domain(int n) const {
  const auto total = checked_count(n);
  const int m = dim();
  const auto L = static_cast<std::size_t>(size());
  std::vector<std::int64_t> pts(static_cast<std::size_t>(m), 0);
  pts.reserve(total * m);
  std::size_t count = 1;
  for (int level = 0; level < n; ++level) {
    // points_{l+1}[d + L r] = Q points_l[r] + digits[d]
    std::vector<std::int64_t> next(count * L * m);
    for (std::size_t r = 0; r < count; ++r) {
      IntVec p(pts.begin() + r * m, pts.begin() + (r + 1) * m);
      const IntVec qp = q_ * p;
      for (std::size_t d = 0; d < L; ++d) {
        const auto base = (d + L * r) * m;
        for (int c = 0; c < m; ++c) next[base + c] = qp[c] + digits_[d][c];
      }
    }
    pts = std::move(next);
    count *= L;
  }
  return DigitDomain(n, m, std::move(pts));
}

std::pair<IntVec, IntVec> DigitDomain::bounds() const {
  IntVec lo(static_cast<std::size_t>(dim_), 0), hi(static_cast<std::size_t>(dim_), 0);
  for (std::size_t i = 0; i < size(); ++i) {
    auto p = point(i);
    for (int c = 0; c < dim_; ++c) {
      if (i == 0 || p[c] < lo[c]) lo[c] = p[c];
      if (i == 0 || p[c] > hi[c]) hi[c] = p[c];
    }
  }
  return {lo, hi};
}

namespace {

Eigen::MatrixXd inverse_power(const IntMatrix& q, int k) {
  const int m = q.rows();
  Eigen::MatrixXd qd(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) qd(i, j) = static_cast<double>(q(i, j));
  Eigen::MatrixXd inv = qd.inverse();
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(m, m);
  for (int i = 0; i < k; ++i) r = inv * r;
  return r;
}

}  // namespace

double tile_measure_estimate(const DigitSystem& sys, int k, int* frame_level) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "approximation level must be at least 1");
  const int shift = std::max(1, k / 3);
  const int j = k - shift;
  if (frame_level) *frame_level = j;
  const auto dom = sys.digit_domain(k);
  const int m = sys.dim();
  const Eigen::MatrixXd scale = inverse_power(sys.expansion(), shift);
  // Cells of the lattice Q^{-j} Z^m, expressed in the coordinates Q^j x.
  std::unordered_map<IntVec, std::uint32_t, IntVecHash> cells;
  cells.reserve(dom.size() / 4 + 1);
  Eigen::VectorXd p(m);
  IntVec cell(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < dom.size(); ++i) {
    auto pt = dom.point(i);
    for (int c = 0; c < m; ++c) p(c) = static_cast<double>(pt[c]);
    const Eigen::VectorXd y = scale * p;
    for (int c = 0; c < m; ++c) cell[c] = static_cast<std::int64_t>(std::floor(y(c) + 1e-9));
    ++cells[cell];
  }
  std::map<std::uint32_t, std::size_t> histogram;
  for (const auto& [key, n] : cells) ++histogram[n];
  std::uint32_t mode = 0;
  std::size_t best = 0;
  for (const auto& [n, freq] : histogram) {
    if (freq > best || (freq == best && n > mode)) {
      best = freq;
      mode = n;
    }
  }
  const double adet = static_cast<double>(sys.det() < 0 ? -sys.det() : sys.det());
  return std::pow(adet, shift) / static_cast<double>(mode);
}

TileRaster raster_digit_tile(const DigitSystem& sys, int k, double resolution, double tolerance) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "approximation level must be at least 1");
  if (!(resolution > 0)) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  TileRaster out;
  out.level = k;
  out.resolution = resolution;
  out.tolerance = tolerance;
  out.measure_estimate = tile_measure_estimate(sys, k, &out.frame_level);
  out.previous_estimate = k > 1 ? tile_measure_estimate(sys, k - 1) : out.measure_estimate;
  out.unit_verdict = std::abs(out.measure_estimate - 1.0) <= tolerance &&
                     std::abs(out.previous_estimate - 1.0) <= tolerance;

  const int m = sys.dim();
  if (m > 2) return out;

  const auto dom = sys.digit_domain(k);
  const Eigen::MatrixXd scale = inverse_power(sys.expansion(), k);
  std::vector<double> xs(dom.size() * m);
  std::vector<double> lo(m, 0), hi(m, 0);
  Eigen::VectorXd p(m);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    auto pt = dom.point(i);
    for (int c = 0; c < m; ++c) p(c) = static_cast<double>(pt[c]);
    const Eigen::VectorXd y = scale * p;
    for (int c = 0; c < m; ++c) {
      xs[i * m + c] = y(c);
      if (i == 0 || y(c) < lo[c]) lo[c] = y(c);
      if (i == 0 || y(c) > hi[c]) hi[c] = y(c);
    }
  }
  // Each point stands for a cell of volume |det Q|^{-k}; pad by its extent.
  const double adet = static_cast<double>(sys.det() < 0 ? -sys.det() : sys.det());
  const double pad = std::pow(adet, -static_cast<double>(k) / m);
  out.shape.assign(2, 1);
  out.origin.assign(2, 0.0);
  std::size_t total = 1;
  for (int c = 0; c < m; ++c) {
    out.origin[c] = lo[c];
    const double extent = hi[c] - lo[c] + pad;
    out.shape[c] = std::max(1, static_cast<int>(std::ceil(extent * resolution)));
    total *= static_cast<std::size_t>(out.shape[c]);
  }
  if (total > sys.max_cells()) {
    throw Error(ErrorCode::DomainTooLarge, "raster of " + std::to_string(total) + " cells exceeds the cap of " +
                                               std::to_string(sys.max_cells()) + "; lower the resolution");
  }
  out.counts.assign(total, 0);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    std::size_t cell = 0;
    std::size_t stride = 1;
    for (int c = 0; c < m; ++c) {
      int ix = static_cast<int>(std::floor((xs[i * m + c] - lo[c]) * resolution));
      ix = std::clamp(ix, 0, out.shape[c] - 1);
      cell += static_cast<std::size_t>(ix) * stride;
      stride *= static_cast<std::size_t>(out.shape[c]);
    }
    ++out.counts[cell];
  }
  const auto occupied = static_cast<double>(std::count_if(out.counts.begin(), out.counts.end(),
                                                           [](std::uint32_t c) { return c != 0; }));
  out.occupancy_measure = occupied / std::pow(resolution, m);
  return out;
}

}  // namespace spinsub
