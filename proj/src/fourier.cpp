#include "spinsub/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "spinsub/kernels.hpp"

namespace spinsub {

namespace {

std::complex<double> expi(double turns) { return std::polar(1.0, 2.0 * std::numbers::pi * turns); }

}  // namespace

DisplacementMatrix::DisplacementMatrix(const Substitution& s) : n_(s.alphabet_size()) {
  sets_.resize(static_cast<std::size_t>(n_) * n_);
  for (int j = 0; j < n_; ++j)
    for (int d = 0; d < s.digit_count(); ++d) sets_[static_cast<std::size_t>(s.apply(j, d)) * n_ + j].push_back(d);
}

Eigen::MatrixXi DisplacementMatrix::cardinalities() const {
  Eigen::MatrixXi m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = static_cast<int>(at(i, j).size());
  return m;
}

FourierBlock::FourierBlock(const DigitSystem& digits, int dim, std::vector<Term> terms, std::string label)
    : dim_(dim), terms_(std::move(terms)), label_(std::move(label)) {
  const int m = digits.dim();
  for (const auto& d : digits.digits()) {
    Eigen::VectorXd v(m);
    for (int c = 0; c < m; ++c) v(c) = static_cast<double>(d[c]);
    positions_.push_back(v);
  }
  qt_.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) qt_(i, j) = static_cast<double>(digits.expansion()(j, i));
}

Eigen::MatrixXcd FourierBlock::evaluate(const Eigen::VectorXd& k) const {
  std::vector<std::complex<double>> phase(positions_.size());
  for (std::size_t d = 0; d < positions_.size(); ++d) phase[d] = expi(k.dot(positions_[d]));
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (const auto& t : terms_) b(t.row, t.col) += t.coeff * phase[static_cast<std::size_t>(t.digit)];
  return b;
}

Eigen::VectorXd FourierBlock::advance(const Eigen::VectorXd& k) const {
  Eigen::VectorXd next = qt_ * k;
  for (int c = 0; c < next.size(); ++c) next(c) -= std::floor(next(c));
  return next;
}

int FourierBlock::rank() const {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(evaluate(Eigen::VectorXd::Zero(lattice_dim())));
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-9 * sv(0)) ++r;
  return r;
}

FourierBlock fourier_matrix(const Substitution& s) {
  std::vector<FourierBlock::Term> terms;
  for (int j = 0; j < s.alphabet_size(); ++j)
    for (int d = 0; d < s.digit_count(); ++d) terms.push_back({s.apply(j, d), j, d, 1.0});
  return {s.digits(), s.alphabet_size(), std::move(terms), "B"};
}

Eigen::MatrixXcd fourier_matrix(const Substitution& s, const Eigen::VectorXd& k) {
  return fourier_matrix(s).evaluate(k);
}

FourierBlock fourier_block(const SpinSystem& sys, const Character& chi) {
  const auto cw = chi_of_matrix(chi, sys.w(), sys.group());
  std::vector<FourierBlock::Term> terms;
  const int L = sys.digit_count();
  for (int d = 0; d < L; ++d)
    for (int e = 0; e < L; ++e) terms.push_back({d, e, d, cw.angle(e, d).value()});
  return {sys.digits(), L, std::move(terms), "chi(" + chi.str() + ")"};
}

BlockDiagonalization block_diagonalize(const SpinSystem& sys) {
  BlockDiagonalization bd;
  const auto& g = sys.group();
  const int L = sys.digit_count();
  const int n = sys.alphabet_size();
  bd.characters = enumerate_characters(g);
  bd.basis = Eigen::MatrixXcd::Zero(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(g.order()));
  for (std::size_t c = 0; c < bd.characters.size(); ++c) {
    const auto& chi = bd.characters[c];
    bd.blocks.push_back(fourier_block(sys, chi));
    for (int h = 0; h < g.order(); ++h) {
      const auto conj_val = std::conj(g.value(chi, g.element_at(h)));
      for (int d = 0; d < L; ++d) bd.basis(sys.letter_index({h, d}), static_cast<int>(c) * L + d) = conj_val * norm;
    }
  }
  return bd;
}

double block_residual(const SpinSystem& sys, const BlockDiagonalization& bd, const Eigen::VectorXd& k) {
  const auto b = fourier_matrix(sys.as_substitution(), k);
  const Eigen::MatrixXcd conj = bd.basis.adjoint() * b * bd.basis;
  Eigen::MatrixXcd direct = Eigen::MatrixXcd::Zero(b.rows(), b.cols());
  const int L = sys.digit_count();
  for (std::size_t c = 0; c < bd.blocks.size(); ++c) {
    const int off = static_cast<int>(c) * L;
    direct.block(off, off, L, L) = bd.blocks[c].evaluate(k);
  }
  return (conj - direct).norm();
}

double unitarity_residual(const FourierBlock& block, const Eigen::VectorXd& k) {
  const auto b = block.evaluate(k);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(b.rows(), b.cols());
  return (b * b.adjoint() - static_cast<double>(block.digit_count()) * id).norm();
}

CocycleProduct cocycle_product(const FourierBlock& block, const Eigen::VectorXd& k, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "cocycle length must be at least 1");
  CocycleProduct p;
  Eigen::VectorXd x = k;
  p.scaled = block.evaluate(x);
  for (int step = 1; step <= n; ++step) {
    const double s = p.scaled.norm();
    if (s > 0) {
      p.scaled /= s;
      p.log_scale += std::log(s);
    }
    if (step == n) break;
    x = block.advance(x);
    p.scaled = p.scaled * block.evaluate(x);
  }
  return p;
}

std::size_t QuadratureGrid::size() const {
  std::size_t s = 1;
  for (int c = 0; c < dim; ++c) s *= static_cast<std::size_t>(per_axis);
  return s;
}

Eigen::VectorXd QuadratureGrid::point(std::size_t index) const {
  Eigen::VectorXd x(dim);
  for (int c = 0; c < dim; ++c) {
    const auto i = index % static_cast<std::size_t>(per_axis);
    index /= static_cast<std::size_t>(per_axis);
    x(c) = (static_cast<double>(i) + 0.5) / static_cast<double>(per_axis);
  }
  return x;
}

long default_grid(int dim) {
  if (dim == 1) return 1L << 16;
  if (dim == 2) return 1L << 10;
  return 1L << 6;
}

LyapunovBound lyapunov_bound(const FourierBlock& block, int n, const LyapunovOptions& opts) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be at least 1");
  const int rank = block.rank();
  if (rank < block.size() && !opts.allow_rank_deficient) {
    throw Error(ErrorCode::RankDeficient, "block " + block.label() + " has rank " + std::to_string(rank) + " < " +
                                              std::to_string(block.size()) +
                                              "; use the factor-substitution path instead");
  }
  const QuadratureGrid grid{block.lattice_dim(), opts.grid > 0 ? opts.grid : default_grid(block.lattice_dim())};
  const auto values = opts.parallel ? kernels::lyapunov_integrand_parallel(block, n, opts.norm, grid)
                                    : kernels::lyapunov_integrand_serial(block, n, opts.norm, grid);
  double sum = 0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= values.size() > 1 ? static_cast<double>(values.size() - 1) : 1.0;

  LyapunovBound b;
  b.label = block.label();
  b.n = n;
  b.f = mean;
  b.threshold = 0.5 * std::log(static_cast<double>(block.digit_count()));
  b.points = values.size();
  b.standard_error = std::sqrt(var / static_cast<double>(values.size()));
  // Floor at rounding level so a constant integrand on the threshold stays inconclusive.
  b.epsilon = std::max(opts.se_factor * b.standard_error, 1e-10);
  b.norm = opts.norm;
  b.singular = b.f < b.threshold - b.epsilon;
  return b;
}

const char* norm_name(MatrixNorm n) { return n == MatrixNorm::Frobenius ? "frobenius" : "spectral"; }

std::string lyapunov_csv(const std::vector<LyapunovBound>& rows) {
  std::ostringstream os;
  os << "N,f,2f,threshold,margin,epsilon,verdict\n";
  os << std::setprecision(6) << std::fixed;
  for (const auto& r : rows) {
    os << r.n << ',' << r.f << ',' << r.two_f() << ',' << r.threshold << ',' << r.margin() << ','
       << std::setprecision(8) << r.epsilon << std::setprecision(6) << ',' << (r.singular ? "singular" : "inconclusive")
       << '\n';
  }
  return os.str();
}

}  // namespace spinsub
