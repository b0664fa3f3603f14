#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace spinsub {

/// Reduced fraction num/den in [0, 1), read as the point e^{2 pi i num/den}.
class RationalAngle {
 public:
  RationalAngle() = default;
  RationalAngle(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  double turns() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::complex<double> value() const;

  RationalAngle operator+(const RationalAngle& o) const;
  RationalAngle operator-(const RationalAngle& o) const;
  RationalAngle operator-() const;
  bool operator==(const RationalAngle&) const = default;

  std::string str() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Residues (g_1, ..., g_k) with 0 <= g_i < n_i.
using GroupElement = std::vector<int>;

/// Exponents (a_1, ..., a_k); chi(g) = exp(2 pi i sum a_i g_i / n_i).
struct Character {
  std::vector<int> exponents;
  bool is_trivial() const;
  std::string str() const;
  bool operator==(const Character&) const = default;
};

/// Product of cyclic groups C_{n_1} x ... x C_{n_k}. Elements and characters
/// are enumerated lexicographically with the last component varying fastest.
class AbelianGroup {
 public:
  AbelianGroup() = default;
  explicit AbelianGroup(std::vector<int> orders);

  const std::vector<int>& orders() const { return orders_; }
  int rank() const { return static_cast<int>(orders_.size()); }
  int order() const { return order_; }
  /// lcm of the factor orders; every character value is an exponent()-th root of unity.
  int exponent() const { return exponent_; }

  bool contains(const GroupElement& g) const;
  GroupElement identity() const { return GroupElement(orders_.size(), 0); }
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;

  int index_of(const GroupElement& g) const;
  GroupElement element_at(int index) const;
  std::vector<GroupElement> elements() const;
  /// Index arithmetic, table-driven for small groups.
  int multiply_index(int a, int b) const;
  int inverse_index(int a) const;

  bool valid_character(const Character& chi) const;
  /// chi(g) as an integer power of zeta_exponent().
  int power(const Character& chi, const GroupElement& g) const;
  RationalAngle evaluate(const Character& chi, const GroupElement& g) const;
  std::complex<double> value(const Character& chi, const GroupElement& g) const;

 private:
  std::vector<int> orders_;
  int order_ = 1;
  int exponent_ = 1;
  std::vector<int> mul_table_;  // empty for large groups
};

std::vector<Character> enumerate_characters(const AbelianGroup& g);

struct KernelInfo {
  std::vector<GroupElement> elements;
  int quotient_order = 1;  // |G| / |ker chi|, the order of the cyclic group chi(G)
};

KernelInfo kernel(const Character& chi, const AbelianGroup& g);

/// W(d_i, d_j) for i, j over the digit set, row index i first.
class SpinMatrix {
 public:
  SpinMatrix() = default;
  SpinMatrix(int size, std::vector<GroupElement> entries);

  int size() const { return size_; }
  const GroupElement& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * size_ + j]; }
  const std::vector<GroupElement>& entries() const { return entries_; }

 private:
  int size_ = 0;
  std::vector<GroupElement> entries_;
};

/// Entrywise chi(W) with exact angles.
class AngleMatrix {
 public:
  AngleMatrix(int rows, int cols, int root_order)
      : rows_(rows), cols_(cols), root_(root_order), powers_(static_cast<std::size_t>(rows) * cols, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  /// N such that every entry is a power of zeta_N.
  int root_order() const { return root_; }
  int& power(int i, int j) { return powers_[static_cast<std::size_t>(i) * cols_ + j]; }
  int power(int i, int j) const { return powers_[static_cast<std::size_t>(i) * cols_ + j]; }
  RationalAngle angle(int i, int j) const { return {power(i, j), root_}; }

  Eigen::MatrixXcd to_complex() const;

 private:
  int rows_;
  int cols_;
  int root_;
  std::vector<int> powers_;
};

AngleMatrix chi_of_matrix(const Character& chi, const SpinMatrix& w, const AbelianGroup& g);

/// Integer polynomial in zeta_N, sum_k c_k zeta_N^k. Zero test is exact:
/// the value vanishes iff the cyclotomic polynomial Phi_N divides it.
class CyclotomicSum {
 public:
  explicit CyclotomicSum(int n) : n_(n), coeffs_(static_cast<std::size_t>(n), 0) {}

  int root_order() const { return n_; }
  void add_power(std::int64_t k, std::int64_t coeff = 1);
  bool is_zero() const;
  std::complex<double> value() const;

 private:
  int n_;
  std::vector<std::int64_t> coeffs_;
};

/// Coefficients of Phi_n, lowest degree first.
std::vector<std::int64_t> cyclotomic_polynomial(int n);

}  // namespace spinsub
