#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "spinsub/odometer.hpp"

using namespace spinsub;

namespace {

OdometerPoint random_point(const DigitSystem& ds, int precision, std::mt19937& rng) {
  OdometerPoint p;
  for (int i = 0; i < precision; ++i) p.digits.push_back(static_cast<int>(rng() % ds.size()));
  return p;
}

}  // namespace

TEST_CASE("odometer_add") {
  const auto ds = DigitSystem::create(IntMatrix(1, 1, {2}), {{0}, {1}});
  CHECK(odometer_add(ds, {{1, 1, 1}}, {1}).digits == DigitString{0, 0, 0});
  CHECK(odometer_add(ds, {{1, 0, 1}}, {1}).digits == DigitString{0, 1, 1});
  CHECK(odometer_add(ds, {{1, 0, 1}}, {0}).digits == DigitString{1, 0, 1});

  const auto tri = load_config(oracle::fixture("triomino")).spin_system().digits();
  std::mt19937 rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto j = random_point(tri, 4, rng);
    // Integer oracle: evaluate, add, re-expand.
    const auto x = tri.evaluate(j.digits);
    const IntVec v{1, 0};
    CHECK(odometer_add(tri, j, v).digits == tri.expand_point(add(x, v), 4));
    const IntVec w{static_cast<std::int64_t>(rng() % 7) - 3, static_cast<std::int64_t>(rng() % 7) - 3};
    CHECK(odometer_add(tri, odometer_add(tri, j, v), w) == odometer_add(tri, j, add(v, w)));
  }
}

TEST_CASE("spin_cocycle") {
  const auto rs = load_config(oracle::fixture("rudin_shapiro")).spin_system();
  CHECK(spin_cocycle(rs, {0}, {{0, 1, 1}}).spin == 0);
  CHECK(spin_cocycle(rs, {0}, {{0, 1, 1}}).depth == 0);

  SUBCASE("RS, shift by one, against adjacent cells of a level-8 supertile") {
    const int n = 8;
    const auto& g = rs.group();
    for (int seed = 0; seed < rs.digit_count(); ++seed) {
      const auto tile = supertile(rs.as_substitution(), rs.letter_index({0, seed}), n);
      for (std::size_t p = 0; p + 1 < tile.cells.size(); ++p) {
        auto j = rs.digits().index_string(p, n);
        j.push_back(seed);
        const int s0 = rs.letter_at(tile.cells[p]).spin;
        const int s1 = rs.letter_at(tile.cells[p + 1]).spin;
        CHECK(spin_cocycle(rs, {1}, {j}).spin == g.multiply_index(s1, g.inverse_index(s0)));
      }
    }
  }

  SUBCASE("precision is checked") {
    try {
      spin_cocycle(rs, {1}, {{1, 1, 1}});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InsufficientPrecision);
    }
  }

  SUBCASE("cocycle identity") {
    std::mt19937 rng(9);
    int checked = 0;
    for (const char* f : {"rudin_shapiro", "triomino", "vierdrachen", "c4"}) {
      const auto sys = load_config(oracle::fixture(f)).spin_system();
      const int m = sys.digits().dim();
      const auto& g = sys.group();
      for (int t = 0; t < 100; ++t) {
        const auto j = random_point(sys.digits(), 16, rng);
        IntVec v(m), w(m);
        for (int c = 0; c < m; ++c) {
          v[c] = static_cast<std::int64_t>(rng() % 9) - 4;
          w[c] = static_cast<std::int64_t>(rng() % 9) - 4;
        }
        try {
          const int lhs = spin_cocycle(sys, add(v, w), j).spin;
          const int rhs = g.multiply_index(spin_cocycle(sys, v, odometer_add(sys.digits(), j, w)).spin,
                                           spin_cocycle(sys, w, j).spin);
          CHECK(lhs == rhs);
          ++checked;
        } catch (const Error& e) {
          CHECK(e.code() == ErrorCode::InsufficientPrecision);
        }
      }
    }
    CHECK(checked > 300);
  }
}

TEST_CASE("verify_skew_consistency") {
  const auto rs = load_config(oracle::fixture("rudin_shapiro")).spin_system();
  const auto r = verify_skew_consistency(rs, 8, shifts_in_ball(1, 8));
  CHECK(r.pairs > 0);
  CHECK(r.violations == 0);

  const auto v = load_config(oracle::fixture("vierdrachen")).spin_system();
  const auto rv = verify_skew_consistency(v, 6, axis_shifts(2));
  CHECK(rv.pairs > 0);
  CHECK(rv.violations == 0);

  CHECK(verify_skew_consistency(rs, 0, shifts_in_ball(1, 2)).violations == 0);

  for (const char* f : {"triomino", "pp_factor", "c4", "rs_kron"}) {
    CAPTURE(f);
    const auto sys = load_config(oracle::fixture(f)).spin_system();
    const auto rep = verify_skew_consistency(sys, sys.digits().dim() == 1 ? 6 : 5,
                                             shifts_in_ball(sys.digits().dim(), 2));
    CHECK(rep.pairs > 0);
    CHECK(rep.violations == 0);
  }
}

TEST_CASE("odometer_eigenvalues") {
  const auto b = DigitSystem::create(IntMatrix(1, 1, {2}), {{0}, {1}});
  CHECK(odometer_eigenvalues(b, 3).basis()(0, 0) == doctest::Approx(0.125));
  const auto three = DigitSystem::create(IntMatrix(1, 1, {3}), {{0}, {1}, {2}});
  CHECK(odometer_eigenvalues(three, 2).basis()(0, 0) == doctest::Approx(1.0 / 9));

  const auto tri = load_config(oracle::fixture("triomino")).spin_system().digits();
  const auto e = odometer_eigenvalues(tri, 1).basis();
  Eigen::Matrix2d qt;
  qt << 2, -1, 1, 1;  // Q^T
  CHECK((qt * e - Eigen::Matrix2d::Identity()).norm() < 1e-12);
  const auto e2 = odometer_eigenvalues(tri, 2).basis();
  CHECK((qt * qt * e2 - Eigen::Matrix2d::Identity()).norm() < 1e-12);
}
