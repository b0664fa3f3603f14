#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "spinsub/spin_algebra.hpp"
#include "spinsub/substitution.hpp"

namespace spinsub {

/// T_ij = digits d with S(a_j, d) = a_i.
class DisplacementMatrix {
 public:
  explicit DisplacementMatrix(const Substitution& s);

  int size() const { return n_; }
  const std::vector<int>& at(int i, int j) const { return sets_[static_cast<std::size_t>(i) * n_ + j]; }
  /// Cardinalities; equals the substitution matrix.
  Eigen::MatrixXi cardinalities() const;

 private:
  int n_ = 0;
  std::vector<std::vector<int>> sets_;
};

/// Matrix-valued trigonometric polynomial k -> sum_t c_t e^{2 pi i <k|x_t>} E_{r_t c_t}
/// together with the base map k -> Q^T k mod 1. Immutable, safe to evaluate
/// from many threads.
class FourierBlock {
 public:
  struct Term {
    int row;
    int col;
    int digit;
    std::complex<double> coeff;
  };

  FourierBlock(const DigitSystem& digits, int dim, std::vector<Term> terms, std::string label);

  int size() const { return dim_; }
  int lattice_dim() const { return static_cast<int>(qt_.rows()); }
  int digit_count() const { return static_cast<int>(positions_.size()); }
  const std::string& label() const { return label_; }
  const std::vector<Term>& terms() const { return terms_; }

  Eigen::MatrixXcd evaluate(const Eigen::VectorXd& k) const;
  /// Q^T k reduced to [0, 1)^m.
  Eigen::VectorXd advance(const Eigen::VectorXd& k) const;
  /// Numerical rank of the block at k = 0, threshold 1e-9 sigma_max.
  int rank() const;

 private:
  int dim_;
  std::vector<Term> terms_;
  std::vector<Eigen::VectorXd> positions_;
  Eigen::MatrixXd qt_;
  std::string label_;
};

/// B(k)_ij = sum over x in T_ij of e^{2 pi i <k|x>}.
FourierBlock fourier_matrix(const Substitution& s);
Eigen::MatrixXcd fourier_matrix(const Substitution& s, const Eigen::VectorXd& k);

/// B_chi(k) = diag(e^{2 pi i <k|d>}) chi(W)^T.
FourierBlock fourier_block(const SpinSystem& sys, const Character& chi);

struct BlockDiagonalization {
  std::vector<Character> characters;
  std::vector<FourierBlock> blocks;
  /// Columns (chi, d) in character-major order: conj(chi(g)) / sqrt|G| on the letters g.d.
  Eigen::MatrixXcd basis;
};

BlockDiagonalization block_diagonalize(const SpinSystem& sys);

/// |S^{-1} B(k) S - direct sum of B_chi(k)|_F.
double block_residual(const SpinSystem& sys, const BlockDiagonalization& bd, const Eigen::VectorXd& k);
/// |B_chi(k) B_chi(k)^* - |D| I|_F.
double unitarity_residual(const FourierBlock& block, const Eigen::VectorXd& k);

/// B^(N)(k) = B(k) B(Q^T k) ... B((Q^T)^{N-1} k) = scaled * e^{log_scale}.
struct CocycleProduct {
  Eigen::MatrixXcd scaled;
  double log_scale = 0;
  Eigen::MatrixXcd value() const { return scaled * std::exp(log_scale); }
};

CocycleProduct cocycle_product(const FourierBlock& block, const Eigen::VectorXd& k, int n);

enum class MatrixNorm { Frobenius, Spectral };

struct LyapunovOptions {
  MatrixNorm norm = MatrixNorm::Frobenius;
  /// Points per axis; 0 picks 2^16 for m = 1 and 2^10 for m = 2.
  long grid = 0;
  bool parallel = true;
  bool allow_rank_deficient = false;
  double se_factor = 3.0;
};

struct LyapunovBound {
  std::string label;
  int n = 0;
  double f = 0;              // (1/2N) mean log |B^(N)|^2
  double threshold = 0;      // log sqrt|D|
  double standard_error = 0;  // sample std of the integrand / sqrt(points)
  double epsilon = 0;         // se_factor * standard_error
  std::size_t points = 0;
  MatrixNorm norm = MatrixNorm::Frobenius;
  bool singular = false;      // f < threshold - epsilon
  double two_f() const { return 2 * f; }
  double margin() const { return threshold - f; }
};

LyapunovBound lyapunov_bound(const FourierBlock& block, int n, const LyapunovOptions& opts = {});

/// Midpoint grid over [0,1)^m with `per_axis` points per axis, first axis fastest.
struct QuadratureGrid {
  int dim = 1;
  long per_axis = 1;
  std::size_t size() const;
  Eigen::VectorXd point(std::size_t index) const;
};

long default_grid(int dim);

std::string lyapunov_csv(const std::vector<LyapunovBound>& rows);
const char* norm_name(MatrixNorm n);

}  // namespace spinsub
