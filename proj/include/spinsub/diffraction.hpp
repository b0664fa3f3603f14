#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spinsub/kernels.hpp"
#include "spinsub/substitution.hpp"

namespace spinsub {

/// Supertile with complex weights on its cells, laid out on its bounding box.
struct WeightedPatch {
  int level = 0;
  IntVec lo;                 // lattice point of grid offset 0
  std::size_t cells = 0;     // normalization N
  kernels::WeightGrid grid;  // weights are zero off the patch
};

/// w(g.d) = chi(g), optionally restricted to the digit class d (zero elsewhere).
WeightedPatch make_weighted_patch(const SpinSystem& sys, Letter seed, int n, const Character& chi,
                                  std::optional<int> digit_class = std::nullopt);
/// Arbitrary per-letter weights on S^n(seed).
WeightedPatch make_weighted_patch(const Substitution& s, int seed, int n,
                                  const std::vector<std::complex<double>>& letter_weights);

struct AutocorrelationTable {
  std::vector<IntVec> lags;  // all j with |j|_inf <= J
  std::vector<std::complex<double>> eta;
  std::vector<std::size_t> pairs;
  std::vector<std::size_t> dropped;  // boundary pairs left out
  std::size_t normalization = 0;
  int radius = 0;

  std::complex<double> at(const IntVec& j) const;
  /// max |eta(j)| over 0 < |j|_inf <= J.
  double max_off_origin() const;
};

/// eta(j) = (1/N) sum over x with x, x+j in the patch of w(x+j) conj(w(x)).
AutocorrelationTable autocorrelation(const WeightedPatch& patch, int radius, bool parallel = true);

struct DiffractionEstimate {
  int dim = 1;
  long grid = 0;                  // K points per axis, k = index / K
  std::vector<double> intensity;  // first axis fastest
  double mean = 0;
  double max = 0;
  double min = 0;
  std::size_t peak_index = 0;
  std::vector<double> peak_k;
  double peak_fraction = 0;  // max intensity / N
  double second_max = 0;     // largest intensity away from the peak bin
  double max_over_mean() const { return mean > 0 ? max / mean : 0; }
  double max_over_min() const { return min > 0 ? max / min : std::numeric_limits<double>::infinity(); }
};

/// |sum w(x) e^{2 pi i <k|x>}|^2 / N on the grid (Z/K)^m via FFTW. K smaller
/// than the patch extent aliases lattice points modulo K.
DiffractionEstimate diffraction_estimate(const WeightedPatch& patch, long grid);
/// Direct exponential sum sum_x w(x) e^{2 pi i <k|x>}.
std::complex<double> exponential_sum(const WeightedPatch& patch, const std::vector<double>& k);

struct SpectralCoefficientReport {
  bool skipped = false;
  std::string notice;
  int level = 0;
  std::size_t cross_sums = 0;  // pairs (i, j) with distinct top digits
  std::size_t nonzero = 0;     // sums that failed to vanish exactly
  int patch_level = 0;
  double max_eta = 0;          // max |eta(j)|, 0 < |j| <= J, f^chi_d weighting
};

/// Exact level-M cross sums sum_d chi(spin S^M_i(d)) conj(chi(spin S^M_j(d)))
/// plus the empirical autocorrelation of the f^chi_d weighting on S^n(d).
SpectralCoefficientReport spectral_coefficient_check(const SpinSystem& sys, const Character& chi, int digit, int level,
                                                     int radius, int patch_level = -1);

std::string autocorrelation_csv(const AutocorrelationTable& t);
std::string diffraction_csv(const DiffractionEstimate& d);

}  // namespace spinsub
