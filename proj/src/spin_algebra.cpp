#include "spinsub/spin_algebra.hpp"

#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "spinsub/error.hpp"

namespace spinsub {

RationalAngle::RationalAngle(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw Error(ErrorCode::InvalidArgument, "angle denominator must be positive");
  num %= den;
  if (num < 0) num += den;
  const auto g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::complex<double> RationalAngle::value() const {
  return std::polar(1.0, 2.0 * std::numbers::pi * turns());
}

RationalAngle RationalAngle::operator+(const RationalAngle& o) const {
  const auto l = std::lcm(den_, o.den_);
  return {num_ * (l / den_) + o.num_ * (l / o.den_), l};
}

RationalAngle RationalAngle::operator-(const RationalAngle& o) const { return *this + (-o); }

RationalAngle RationalAngle::operator-() const { return {den_ - num_, den_}; }

std::string RationalAngle::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

bool Character::is_trivial() const {
  for (int a : exponents)
    if (a != 0) return false;
  return true;
}

std::string Character::str() const {
  std::string s;
  for (std::size_t i = 0; i < exponents.size(); ++i) s += (i ? "," : "") + std::to_string(exponents[i]);
  return s;
}

AbelianGroup::AbelianGroup(std::vector<int> orders) : orders_(std::move(orders)) {
  for (int n : orders_) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "cyclic factor orders must be at least 2");
    order_ *= n;
    exponent_ = std::lcm(exponent_, n);
  }
  if (order_ <= 256) {
    mul_table_.resize(static_cast<std::size_t>(order_) * order_);
    for (int a = 0; a < order_; ++a)
      for (int b = 0; b < order_; ++b)
        mul_table_[static_cast<std::size_t>(a) * order_ + b] = index_of(multiply(element_at(a), element_at(b)));
  }
}

bool AbelianGroup::contains(const GroupElement& g) const {
  if (g.size() != orders_.size()) return false;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] < 0 || g[i] >= orders_[i]) return false;
  return true;
}

GroupElement AbelianGroup::multiply(const GroupElement& a, const GroupElement& b) const {
  GroupElement r(orders_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (a[i] + b[i]) % orders_[i];
  return r;
}

GroupElement AbelianGroup::inverse(const GroupElement& a) const {
  GroupElement r(orders_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (orders_[i] - a[i]) % orders_[i];
  return r;
}

int AbelianGroup::index_of(const GroupElement& g) const {
  int idx = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) idx = idx * orders_[i] + g[i];
  return idx;
}

GroupElement AbelianGroup::element_at(int index) const {
  GroupElement g(orders_.size());
  for (std::size_t i = orders_.size(); i-- > 0;) {
    g[i] = index % orders_[i];
    index /= orders_[i];
  }
  return g;
}

std::vector<GroupElement> AbelianGroup::elements() const {
  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(order_));
  for (int i = 0; i < order_; ++i) out.push_back(element_at(i));
  return out;
}

int AbelianGroup::multiply_index(int a, int b) const {
  if (!mul_table_.empty()) return mul_table_[static_cast<std::size_t>(a) * order_ + b];
  return index_of(multiply(element_at(a), element_at(b)));
}

int AbelianGroup::inverse_index(int a) const { return index_of(inverse(element_at(a))); }

bool AbelianGroup::valid_character(const Character& chi) const { return contains(chi.exponents); }

int AbelianGroup::power(const Character& chi, const GroupElement& g) const {
  std::int64_t p = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i)
    p += static_cast<std::int64_t>(chi.exponents[i]) * g[i] * (exponent_ / orders_[i]);
  return static_cast<int>(p % exponent_);
}

RationalAngle AbelianGroup::evaluate(const Character& chi, const GroupElement& g) const {
  return {power(chi, g), exponent_};
}

std::complex<double> AbelianGroup::value(const Character& chi, const GroupElement& g) const {
  return evaluate(chi, g).value();
}

std::vector<Character> enumerate_characters(const AbelianGroup& g) {
  std::vector<Character> out;
  out.reserve(static_cast<std::size_t>(g.order()));
  for (int i = 0; i < g.order(); ++i) out.push_back(Character{g.element_at(i)});
  return out;
}

KernelInfo kernel(const Character& chi, const AbelianGroup& g) {
  KernelInfo k;
  for (const auto& e : g.elements())
    if (g.power(chi, e) == 0) k.elements.push_back(e);
  k.quotient_order = g.order() / static_cast<int>(k.elements.size());
  return k;
}

SpinMatrix::SpinMatrix(int size, std::vector<GroupElement> entries) : size_(size), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(size) * size) {
    throw Error(ErrorCode::InvalidArgument, "spin matrix must be L x L");
  }
}

Eigen::MatrixXcd AngleMatrix::to_complex() const {
  Eigen::MatrixXcd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = angle(i, j).value();
  return m;
}

AngleMatrix chi_of_matrix(const Character& chi, const SpinMatrix& w, const AbelianGroup& g) {
  AngleMatrix out(w.size(), w.size(), g.exponent());
  for (int i = 0; i < w.size(); ++i)
    for (int j = 0; j < w.size(); ++j) out.power(i, j) = g.power(chi, w(i, j));
  return out;
}

namespace {

// p / q for monic q; returns quotient, remainder left in p.
std::vector<std::int64_t> divide_monic(std::vector<std::int64_t>& p, const std::vector<std::int64_t>& q) {
  const std::size_t dq = q.size() - 1;
  if (p.size() <= dq) return {};
  std::vector<std::int64_t> quot(p.size() - dq, 0);
  for (std::size_t i = p.size(); i-- > dq;) {
    const auto c = p[i];
    if (c == 0) continue;
    quot[i - dq] = c;
    for (std::size_t j = 0; j <= dq; ++j) p[i - dq + j] -= c * q[j];
  }
  p.resize(dq);
  return quot;
}

}  // namespace

std::vector<std::int64_t> cyclotomic_polynomial(int n) {
  static std::map<int, std::vector<std::int64_t>> cache;
  static std::recursive_mutex mu;
  std::lock_guard lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  std::vector<std::int64_t> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    auto rem = p;
    p = divide_monic(rem, cyclotomic_polynomial(d));
  }
  cache[n] = p;
  return p;
}

void CyclotomicSum::add_power(std::int64_t k, std::int64_t coeff) {
  k %= n_;
  if (k < 0) k += n_;
  coeffs_[static_cast<std::size_t>(k)] += coeff;
}

bool CyclotomicSum::is_zero() const {
  auto rem = coeffs_;
  divide_monic(rem, cyclotomic_polynomial(n_));
  for (auto c : rem)
    if (c != 0) return false;
  return true;
}

std::complex<double> CyclotomicSum::value() const {
  std::complex<double> s = 0;
  for (int k = 0; k < n_; ++k)
    if (coeffs_[k] != 0) s += static_cast<double>(coeffs_[k]) * RationalAngle(k, n_).value();
  return s;
}

}  // namespace spinsub
