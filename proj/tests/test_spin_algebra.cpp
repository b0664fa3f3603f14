#include <doctest.h>

#include <random>
#include <set>

#include "spinsub/spin_algebra.hpp"

using namespace spinsub;

TEST_CASE("rational angles") {
  CHECK(RationalAngle(3, 4) + RationalAngle(1, 2) == RationalAngle(1, 4));
  CHECK(RationalAngle(-1, 3) == RationalAngle(2, 3));
  CHECK(RationalAngle(2, 4).den() == 2);
  CHECK((-RationalAngle(0, 5)).is_zero());
  CHECK(std::abs(RationalAngle(1, 4).value() - std::complex<double>(0, 1)) < 1e-15);
}

TEST_CASE("enumerate_characters") {
  CHECK(enumerate_characters(AbelianGroup({2})).size() == 2);
  const auto v = enumerate_characters(AbelianGroup({2, 2}));
  REQUIRE(v.size() == 4);
  CHECK(v[0].is_trivial());
  CHECK(v[1].exponents == std::vector<int>{0, 1});
  CHECK(v[2].exponents == std::vector<int>{1, 0});

  const AbelianGroup c4({4});
  const auto chars = enumerate_characters(c4);
  REQUIRE(chars.size() == 4);
  CHECK(std::abs(c4.value(chars[2], {1}) - std::complex<double>(-1, 0)) < 1e-15);

  SUBCASE("evaluation tables are pairwise distinct") {
    const AbelianGroup g({2, 3, 4});
    std::set<std::vector<int>> tables;
    for (const auto& chi : enumerate_characters(g)) {
      std::vector<int> t;
      for (const auto& e : g.elements()) t.push_back(g.power(chi, e));
      tables.insert(t);
    }
    CHECK(tables.size() == static_cast<std::size_t>(g.order()));
  }
}

TEST_CASE("multiplicativity and orthogonality, exact") {
  for (const auto& orders : std::vector<std::vector<int>>{{2}, {3}, {4}, {2, 2}, {2, 4}, {3, 3}, {4, 4, 4}}) {
    const AbelianGroup g(orders);
    const auto chars = enumerate_characters(g);
    for (const auto& chi : chars)
      for (const auto& a : g.elements())
        for (const auto& b : g.elements())
          CHECK(g.evaluate(chi, g.multiply(a, b)) == g.evaluate(chi, a) + g.evaluate(chi, b));
    for (const auto& chi : chars)
      for (const auto& psi : chars) {
        CyclotomicSum s(g.exponent());
        for (const auto& e : g.elements()) s.add_power(g.power(chi, e) - g.power(psi, e));
        if (chi == psi) {
          CHECK_FALSE(s.is_zero());
          CHECK(std::abs(s.value() - static_cast<double>(g.order())) < 1e-9);
        } else {
          CHECK(s.is_zero());
        }
      }
  }
}

TEST_CASE("kernel") {
  const AbelianGroup c4({4});
  const auto k = kernel(Character{{2}}, c4);
  CHECK(k.elements == std::vector<GroupElement>{{0}, {2}});
  CHECK(k.quotient_order == 2);
  CHECK(kernel(Character{{0}}, c4).elements.size() == 4);

  const AbelianGroup v({2, 2});
  const auto k1 = kernel(Character{{0, 1}}, v);
  CHECK(k1.elements == std::vector<GroupElement>{{0, 0}, {1, 0}});
  CHECK(k1.quotient_order == 2);
}

TEST_CASE("chi_of_matrix") {
  const AbelianGroup v({2, 2});
  const SpinMatrix w(2, {{0, 0}, {1, 0}, {0, 0}, {1, 1}});
  const auto m1 = chi_of_matrix(Character{{0, 1}}, w, v).to_complex();
  Eigen::MatrixXcd expect(2, 2);
  expect << 1, 1, 1, -1;
  CHECK((m1 - expect).norm() < 1e-14);
  const auto m0 = chi_of_matrix(Character{{0, 0}}, w, v).to_complex();
  CHECK((m0 - Eigen::MatrixXcd::Ones(2, 2)).norm() < 1e-14);

  // Triomino: W_ij = ij mod 3 gives the Vandermonde matrix in omega.
  const AbelianGroup c3({3});
  std::vector<GroupElement> e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e.push_back({i * j % 3});
  const auto vm = chi_of_matrix(Character{{1}}, SpinMatrix(3, e), c3).to_complex();
  const auto omega = RationalAngle(1, 3).value();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(vm(i, j) - std::pow(omega, i * j)) < 1e-14);
}

TEST_CASE("cyclotomic zero test") {
  CHECK(cyclotomic_polynomial(1) == std::vector<std::int64_t>{-1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<std::int64_t>{1, 0, 1});
  CHECK(cyclotomic_polynomial(6) == std::vector<std::int64_t>{1, -1, 1});
  CHECK(cyclotomic_polynomial(12) == std::vector<std::int64_t>{1, 0, -1, 0, 1});

  CyclotomicSum s(6);  // 1 + zeta^2 + zeta^4 = 0
  s.add_power(0);
  s.add_power(2);
  s.add_power(4);
  CHECK(s.is_zero());
  s.add_power(3);
  CHECK_FALSE(s.is_zero());

  // Random sums agree with floating-point evaluation wherever that is unambiguous.
  std::mt19937 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 24);
    CyclotomicSum c(n);
    for (int t = 0; t < 4; ++t) c.add_power(rng() % n, static_cast<int>(rng() % 3) - 1);
    const double mag = std::abs(c.value());
    if (mag > 1e-6) CHECK_FALSE(c.is_zero());
    if (c.is_zero()) CHECK(mag < 1e-9);
  }
}
