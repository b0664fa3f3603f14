#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "spinsub/lattice.hpp"
#include "spinsub/spin_algebra.hpp"

namespace spinsub {

/// Constant-shape qubit substitution: letter a and digit d give S(a, d).
/// Letters are plain indices 0..alphabet_size-1.
class Substitution {
 public:
  Substitution(DigitSystem digits, std::vector<std::string> alphabet, std::vector<int> table);

  const DigitSystem& digits() const { return digits_; }
  int alphabet_size() const { return static_cast<int>(alphabet_.size()); }
  int digit_count() const { return digits_.size(); }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::string& name(int letter) const { return alphabet_[static_cast<std::size_t>(letter)]; }
  int letter_index(const std::string& name) const;

  int apply(int letter, int digit) const { return table_[static_cast<std::size_t>(letter) * digit_count() + digit]; }
  const std::vector<int>& table() const { return table_; }

 private:
  DigitSystem digits_;
  std::vector<std::string> alphabet_;
  std::vector<int> table_;  // alphabet x digits
};

/// Letter g.d of a spin substitution.
struct Letter {
  int spin = 0;  // element index in the spin group
  int digit = 0;
  bool operator==(const Letter&) const = default;
};

/// Spin substitution given by (Q, D, G, W): S(g.d', d) = g W(d', d) . d.
class SpinSystem {
 public:
  SpinSystem(DigitSystem digits, AbelianGroup group, SpinMatrix w);

  const DigitSystem& digits() const { return digits_; }
  const AbelianGroup& group() const { return group_; }
  const SpinMatrix& w() const { return w_; }
  int digit_count() const { return digits_.size(); }
  int alphabet_size() const { return group_.order() * digits_.size(); }
  /// Element index of W(i, j).
  int w_index(int i, int j) const { return w_index_[static_cast<std::size_t>(i) * digit_count() + j]; }

  /// Letters are numbered spin-major: index = spin * L + digit.
  int letter_index(Letter a) const { return a.spin * digit_count() + a.digit; }
  Letter letter_at(int index) const { return {index / digit_count(), index % digit_count()}; }
  std::string letter_name(Letter a) const;

  Letter substitute_letter(Letter a, int d) const;
  /// g . a
  Letter act(int g, Letter a) const { return {group_.multiply_index(g, a.spin), a.digit}; }

  Substitution as_substitution() const;

 private:
  DigitSystem digits_;
  AbelianGroup group_;
  SpinMatrix w_;
  std::vector<int> w_index_;
};

/// Level-n patch S^n(a); cells follow the canonical enumeration of D^(n).
struct Supertile {
  int level = 0;
  int type = 0;
  std::vector<int> cells;
};

/// S^n(a) by fusion: S^{n+1}(a) at index r + L^n d is S^n(S(a, d)) at r.
Supertile supertile(const Substitution& s, int a, int n);
/// S^n(a) by n-fold cellwise substitution: new[d + L r] = S(old[r], d).
Supertile supertile_by_substitution(const Substitution& s, int a, int n);

/// spin(a) W(d, i^(M-1)) W(i^(M-1), i^(M-2)) ... W(i^(1), i^(0)), d = digit(a).
int supertile_spin_at(const SpinSystem& sys, Letter a, const DigitString& i);

/// M[i][j] = number of letters i in S(a_j).
Eigen::MatrixXi substitution_matrix(const Substitution& s);

struct Primitivity {
  bool primitive = false;
  int power = 0;  // least p with M^p > 0, 0 when not primitive
};

Primitivity primitivity(const Substitution& s);
Primitivity primitivity(const Eigen::MatrixXi& m);

/// Normalized right Perron eigenvector of M (eigenvalue |D|).
Eigen::VectorXd letter_frequencies(const Substitution& s);

/// Supertile placed on Z^m: dense grid over the bounding box, -1 off the patch.
class SpatialPatch {
 public:
  SpatialPatch(const DigitSystem& digits, const Supertile& tile);

  int dim() const { return static_cast<int>(lo_.size()); }
  const IntVec& lo() const { return lo_; }
  const IntVec& hi() const { return hi_; }
  std::size_t cell_count() const { return cell_count_; }
  /// Letter at x, or -1 outside the patch.
  int at(std::span<const std::int64_t> x) const;
  int at(const IntVec& x) const { return at(std::span<const std::int64_t>(x)); }
  /// Grid offset of x, or -1 when x lies outside the bounding box.
  std::int64_t offset(std::span<const std::int64_t> x) const;
  const std::vector<int>& grid() const { return grid_; }
  const std::vector<std::int64_t>& strides() const { return strides_; }
  const std::vector<std::int64_t>& extent() const { return extent_; }

 private:
  IntVec lo_, hi_;
  std::vector<std::int64_t> extent_, strides_;
  std::vector<int> grid_;
  std::size_t cell_count_ = 0;
};

using Word = std::vector<int>;

/// All distinct words on the box [0, shape) occurring in some S^n(a).
std::set<Word> sample_rectangular_words(const Substitution& s, const std::vector<int>& shape, int n);

/// Spin system on D_1 x D_2 (digit index d_1 * L_2 + d_2) with group G_1 x G_2.
SpinSystem kronecker_compose(const SpinSystem& s1, const SpinSystem& s2, const IntMatrix& q,
                             const std::vector<IntVec>& digits);

struct PeriodicityResult {
  bool periodic_candidate = false;
  IntVec period;                 // smallest period in max-norm, then lexicographic
  std::size_t checked_cells = 0;  // cells of the central region
  int radius = 0;
  int level = 0;
};

/// Heuristic: searches translations 0 < |v|_inf <= r leaving the central half
/// of S^n(a) invariant. Not a proof of periodicity or aperiodicity.
PeriodicityResult periodicity_heuristic(const Substitution& s, int n, int radius, int seed_letter = 0);

}  // namespace spinsub
