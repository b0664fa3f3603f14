#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinsub/fourier.hpp"
#include "spinsub/odometer.hpp"
#include "spinsub/substitution.hpp"

namespace spinsub {

struct UnitarityResult {
  bool unitary = false;
  double residual = 0;  // |U^* U - I|_F for U = chi(W) / sqrt|D|
  bool exact = false;   // decided by cyclotomic arithmetic
};

UnitarityResult is_chi_unitary(const SpinSystem& sys, const Character& chi);
int chi_rank(const SpinSystem& sys, const Character& chi);

/// Substitutive factor attached to a character.
struct FactorSubstitution {
  Character chi;
  int quotient_order = 1;  // |G / ker chi|
  bool rank_one = false;   // alphabet is G / ker chi alone
  Substitution substitution;
  std::optional<SpinSystem> spin_factor;  // general case: spin system over C_n with chi(W) exponents
  bool bijective = false;
  PeriodicityResult periodicity;
};

struct FactorOptions {
  std::size_t cell_budget = 1u << 14;  // supertile size used by the periodicity scan
  int radius = 0;                       // 0 picks 64 for m = 1 and 8 otherwise
};

FactorSubstitution factor_substitution(const SpinSystem& sys, const Character& chi, const FactorOptions& opts = {});

struct BerlinkovSolomyak {
  bool passes = false;           // no eigenvalue of modulus sqrt(L)
  bool applicable = true;        // one-dimensional constant-length system
  std::vector<double> moduli;    // sorted ascending
  double closest_gap = 0;        // min over eigenvalues of | |lambda| - sqrt(L) |
};

BerlinkovSolomyak berlinkov_solomyak_check(const Eigen::MatrixXi& m, int length, int dim = 1);

enum class VerdictType {
  PurePointOdometer,
  Lebesgue,
  Singular,
  SingularContinuous,
  SingularByLyapunov,
  Undetermined,
};

const char* verdict_name(VerdictType t);

struct SpectralVerdict {
  Character chi;
  int index = 0;  // position in the character enumeration
  VerdictType type = VerdictType::Undetermined;
  int rank = 0;
  UnitarityResult unitarity;
  int multiplicity = 0;        // exact Lebesgue multiplicity, 0 otherwise
  int multiplicity_bound = 0;  // upper bound |G / ker chi| in the rank-one branch
  std::string test;            // which test decided
  std::vector<LyapunovBound> lyapunov;
  std::optional<BerlinkovSolomyak> bs;
  std::optional<PeriodicityResult> periodicity;
  std::optional<EigenvalueLattice> eigenvalues;
  std::vector<std::string> notes;
};

struct ClassifyOptions {
  bool assert_aperiodic = false;
  std::vector<int> lyapunov_n{10, 11, 12, 13};
  LyapunovOptions lyapunov;
  FactorOptions factor;
};

struct SpectralReport {
  Primitivity primitivity;
  std::vector<SpectralVerdict> verdicts;
  int total_lebesgue_multiplicity = 0;
  /// Counts compared in the open equivalence question: unitary characters n,
  /// eigenvalues of M with modulus sqrt(L), and n L.
  int unitary_characters = 0;
  int sqrt_l_eigenvalues = 0;
  int unitary_times_l = 0;
};

/// Per-character decision tree. Throws NotPrimitive for non-primitive systems.
SpectralReport classify(const SpinSystem& sys, const ClassifyOptions& opts = {});

}  // namespace spinsub
