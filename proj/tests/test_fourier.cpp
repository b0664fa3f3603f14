#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "spinsub/fourier.hpp"
#include "spinsub/kernels.hpp"

using namespace spinsub;

namespace {

const char* kSpinFixtures[] = {"rudin_shapiro", "triomino", "vierdrachen", "pp_factor", "c4", "rs_kron"};

Eigen::VectorXd random_k(int m, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::VectorXd k(m);
  for (int c = 0; c < m; ++c) k(c) = u(rng);
  return k;
}

std::complex<double> e(double t) { return std::polar(1.0, 2 * std::numbers::pi * t); }

}  // namespace

TEST_CASE("displacement matrix") {
  for (const char* f : {"rudin_shapiro", "triomino", "vierdrachen", "gasket", "rs_kron"}) {
    CAPTURE(f);
    const auto cfg = load_config(oracle::fixture(f));
    const auto s = cfg.substitution();
    const DisplacementMatrix t(s);
    CHECK(t.cardinalities() == substitution_matrix(s));
    // Spin substitutions place each digit once per column; qubit rules may repeat a letter.
    const std::size_t cap = cfg.spin ? 1 : static_cast<std::size_t>(s.digit_count());
    for (int j = 0; j < t.size(); ++j) {
      std::vector<int> all;
      for (int i = 0; i < t.size(); ++i) {
        CHECK(t.at(i, j).size() <= cap);
        all.insert(all.end(), t.at(i, j).begin(), t.at(i, j).end());
      }
      std::sort(all.begin(), all.end());
      std::vector<int> digits(s.digit_count());
      std::iota(digits.begin(), digits.end(), 0);
      CHECK(all == digits);
    }
  }
  // RS: a_j = (h, e) goes to (h W(e, d), d) at digit d.
  const auto rs = load_config(oracle::fixture("rudin_shapiro")).spin_system();
  const DisplacementMatrix t(rs.as_substitution());
  CHECK(t.at(rs.letter_index({0, 0}), rs.letter_index({0, 0})) == std::vector<int>{0});
  CHECK(t.at(rs.letter_index({1, 1}), rs.letter_index({0, 1})) == std::vector<int>{1});
  CHECK(t.at(rs.letter_index({0, 1}), rs.letter_index({0, 1})).empty());
}

TEST_CASE("fourier_matrix") {
  std::mt19937 rng(21);
  for (const char* f : {"rudin_shapiro", "triomino", "gasket", "vierdrachen"}) {
    const auto s = load_config(oracle::fixture(f)).substitution();
    const int m = s.digits().dim();
    const auto b0 = fourier_matrix(s, Eigen::VectorXd::Zero(m));
    CHECK((b0 - substitution_matrix(s).cast<std::complex<double>>()).norm() < 1e-14);
    for (int t = 0; t < 20; ++t) {
      const auto k = random_k(m, rng);
      Eigen::VectorXd shift(m);
      for (int c = 0; c < m; ++c) shift(c) = static_cast<double>(static_cast<int>(rng() % 7) - 3);
      CHECK((fourier_matrix(s, k) - fourier_matrix(s, k + shift)).norm() < 1e-10);
    }
  }

  SUBCASE("triomino block structure") {
    const auto tri = load_config(oracle::fixture("triomino")).spin_system();
    Eigen::Vector2d k(0.17, -0.41);
    const auto b = fourier_matrix(tri.as_substitution(), k);
    const auto x = e(k(0)), y = e(k(1));
    Eigen::Matrix3cd ze, zg, zg2;
    ze << 1, 1, 1, x, 0, 0, y, 0, 0;
    zg << 0, 0, 0, 0, 0, x, 0, y, 0;
    zg2 << 0, 0, 0, 0, x, 0, 0, 0, y;
    // Block (h', h) depends on h' - h only; the identity shift carries Z_e.
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        const Eigen::Matrix3cd blk = b.block(3 * r, 3 * c, 3, 3);
        CHECK((blk - b.block(3 * ((r + 1) % 3), 3 * ((c + 1) % 3), 3, 3)).norm() < 1e-14);
        if (r == c) CHECK((blk - ze).norm() < 1e-14);
      }
    const Eigen::Matrix3cd b10 = b.block(3, 0, 3, 3), b20 = b.block(6, 0, 3, 3);
    const bool order_a = (b10 - zg).norm() < 1e-14 && (b20 - zg2).norm() < 1e-14;
    const bool order_b = (b10 - zg2).norm() < 1e-14 && (b20 - zg).norm() < 1e-14;
    CHECK((order_a || order_b));
  }
}

TEST_CASE("block_diagonalize") {
  std::mt19937 rng(4);
  for (const char* f : kSpinFixtures) {
    CAPTURE(f);
    const auto sys = load_config(oracle::fixture(f)).spin_system();
    const auto bd = block_diagonalize(sys);
    CHECK(bd.blocks.size() == static_cast<std::size_t>(sys.group().order()));
    const auto n = bd.basis.rows();
    CHECK((bd.basis.adjoint() * bd.basis - Eigen::MatrixXcd::Identity(n, n)).norm() < 1e-12);
    double worst = 0;
    for (int t = 0; t < 100; ++t) worst = std::max(worst, block_residual(sys, bd, random_k(sys.digits().dim(), rng)));
    CHECK(worst < 1e-10);
    // The trivial block is rank one everywhere.
    for (int t = 0; t < 5; ++t)
      CHECK(oracle::gauss_rank(bd.blocks[0].evaluate(random_k(sys.digits().dim(), rng))) == 1);
    // Row d, column e carries chi(W(e, d)): the block at k = 0 is chi(W) transposed.
    for (const auto& chi : enumerate_characters(sys.group())) {
      const auto cw = chi_of_matrix(chi, sys.w(), sys.group()).to_complex();
      const auto b0 = fourier_block(sys, chi).evaluate(Eigen::VectorXd::Zero(sys.digits().dim()));
      CHECK((b0 - cw.transpose()).norm() < 1e-13);
    }
  }

  SUBCASE("triomino blocks as displayed") {
    const auto tri = load_config(oracle::fixture("triomino")).spin_system();
    Eigen::Vector2d k(0.3, 0.05);
    const auto x = e(k(0)), y = e(k(1));
    const auto w = RationalAngle(1, 3).value();
    Eigen::Matrix3cd b0, b1, b2;
    b0 << 1, 1, 1, x, x, x, y, y, y;
    b1 << 1, 1, 1, x, w * x, w * w * x, y, w * w * y, w * y;
    b2 << 1, 1, 1, x, w * w * x, w * x, y, w * y, w * w * y;
    CHECK((fourier_block(tri, Character{{0}}).evaluate(k) - b0).norm() < 1e-13);
    CHECK((fourier_block(tri, Character{{1}}).evaluate(k) - b1).norm() < 1e-13);
    CHECK((fourier_block(tri, Character{{2}}).evaluate(k) - b2).norm() < 1e-13);
    CHECK(std::abs(fourier_block(tri, Character{{1}}).evaluate(Eigen::Vector2d::Zero()).determinant()) > 1);
  }

  SUBCASE("unitarity of the spinning blocks") {
    const auto tri = load_config(oracle::fixture("triomino")).spin_system();
    const auto v = load_config(oracle::fixture("vierdrachen")).spin_system();
    for (int t = 0; t < 100; ++t) {
      const auto k = random_k(2, rng);
      CHECK(unitarity_residual(fourier_block(tri, Character{{1}}), k) < 1e-12);
      CHECK(unitarity_residual(fourier_block(tri, Character{{2}}), k) < 1e-12);
      CHECK(unitarity_residual(fourier_block(v, Character{{0, 1}}), k) < 1e-12);
      CHECK(unitarity_residual(fourier_block(tri, Character{{0}}), k) > 1);
    }
  }
}

TEST_CASE("cocycle_product") {
  const auto c4 = load_config(oracle::fixture("c4")).spin_system();
  const auto blk = fourier_block(c4, Character{{1}});
  Eigen::VectorXd k(1);
  k << 0.3;
  CHECK((cocycle_product(blk, k, 1).value() - blk.evaluate(k)).norm() < 1e-13);
  const auto ref = oracle::naive_product({{0, 1}, {0, 2}}, 4, {0.0, 1.0}, 2, 0.3, 5);
  CHECK((cocycle_product(blk, k, 5).value() - ref).norm() < 1e-10);

  std::mt19937 rng(8);
  for (int t = 0; t < 30; ++t) {
    std::uniform_real_distribution<double> u(0, 1);
    const double kk = u(rng);
    k << kk;
    const int n = 1 + t % 9;
    CHECK((cocycle_product(blk, k, n).value() - oracle::naive_product({{0, 1}, {0, 2}}, 4, {0.0, 1.0}, 2, kk, n)).norm() <
          1e-9 * std::pow(2.0, n));
  }

  const auto tri = load_config(oracle::fixture("triomino")).spin_system();
  const auto t1 = fourier_block(tri, Character{{1}});
  for (int n : {1, 4, 9, 40}) {
    const auto p = cocycle_product(t1, random_k(2, rng), n);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(p.scaled);
    const double log_norm = std::log(svd.singularValues()(0)) + p.log_scale;
    CHECK(log_norm == doctest::Approx(n * std::log(3.0) / 2).epsilon(1e-12));
  }
}

TEST_CASE("lyapunov_bound") {
  const auto c4 = load_config(oracle::fixture("c4")).spin_system();
  const auto blk = fourier_block(c4, Character{{1}});
  LyapunovOptions opts;
  opts.grid = 1 << 16;

  const auto b12 = lyapunov_bound(blk, 12, opts);
  CHECK(std::abs(b12.two_f() - 0.688005) < 2e-3);
  CHECK(b12.threshold == doctest::Approx(std::log(2.0) / 2));
  CHECK(b12.singular);
  CHECK(b12.points == static_cast<std::size_t>(1 << 16));

  const auto b10 = lyapunov_bound(blk, 10, opts);
  CHECK(std::abs(b10.two_f() - 0.703953) < 2e-3);
  CHECK_FALSE(b10.singular);

  SUBCASE("unitary blocks sit on the threshold") {
    const auto tri = load_config(oracle::fixture("triomino")).spin_system();
    const auto t1 = fourier_block(tri, Character{{1}});
    LyapunovOptions spectral;
    spectral.norm = MatrixNorm::Spectral;
    spectral.grid = 64;
    for (int n : {1, 3, 6}) {
      const auto b = lyapunov_bound(t1, n, spectral);
      CHECK(std::abs(b.f - std::log(3.0) / 2) < 1e-12);
      CHECK_FALSE(b.singular);
      // The Frobenius norm adds log|D| / 2N on a unitary-scaled product.
      LyapunovOptions frob = spectral;
      frob.norm = MatrixNorm::Frobenius;
      CHECK(std::abs(lyapunov_bound(t1, n, frob).f - std::log(3.0) / 2 - std::log(3.0) / (2 * n)) < 1e-12);
    }
  }

  SUBCASE("subadditivity") {
    LyapunovOptions o;
    o.grid = 4096;
    for (auto norm : {MatrixNorm::Frobenius, MatrixNorm::Spectral}) {
      o.norm = norm;
      const double f3 = lyapunov_bound(blk, 3, o).f, f5 = lyapunov_bound(blk, 5, o).f, f8 = lyapunov_bound(blk, 8, o).f;
      CHECK(f8 <= (3 * f3 + 5 * f5) / 8 + 1e-9);
    }
  }

  SUBCASE("rank-deficient blocks are refused") {
    const auto tri = load_config(oracle::fixture("triomino")).spin_system();
    try {
      lyapunov_bound(fourier_block(tri, Character{{0}}), 4);
      FAIL("expected refusal");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::RankDeficient);
    }
  }

  SUBCASE("csv") {
    const auto csv = lyapunov_csv({b10, b12});
    CHECK(csv.rfind("N,f,2f,threshold,margin,epsilon,verdict\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  }
}

TEST_CASE("kernels: serial and parallel agree bitwise") {
  const auto c4 = load_config(oracle::fixture("c4")).spin_system();
  const auto blk = fourier_block(c4, Character{{1}});
  const QuadratureGrid g{1, 5000};
  for (auto norm : {MatrixNorm::Frobenius, MatrixNorm::Spectral}) {
    const auto a = kernels::lyapunov_integrand_serial(blk, 7, norm, g);
    const auto b = kernels::lyapunov_integrand_parallel(blk, 7, norm, g);
    CHECK(a == b);
  }
  const auto v = load_config(oracle::fixture("vierdrachen")).spin_system();
  const auto vb = fourier_block(v, Character{{1, 1}});
  const QuadratureGrid g2{2, 40};
  CHECK(kernels::lyapunov_integrand_serial(vb, 4, MatrixNorm::Frobenius, g2) ==
        kernels::lyapunov_integrand_parallel(vb, 4, MatrixNorm::Frobenius, g2));

  LyapunovOptions serial, parallel;
  serial.grid = parallel.grid = 2048;
  serial.parallel = false;
  CHECK(lyapunov_bound(blk, 6, serial).f == lyapunov_bound(blk, 6, parallel).f);
}
