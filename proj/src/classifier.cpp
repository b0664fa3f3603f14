#include "spinsub/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace spinsub {

UnitarityResult is_chi_unitary(const SpinSystem& sys, const Character& chi) {
  const auto cw = chi_of_matrix(chi, sys.w(), sys.group());
  const int L = sys.digit_count();
  UnitarityResult r;
  const Eigen::MatrixXcd u = cw.to_complex() / std::sqrt(static_cast<double>(L));
  r.residual = (u.adjoint() * u - Eigen::MatrixXcd::Identity(L, L)).norm();
  if (sys.group().order() <= 64) {
    // Columns j != k are orthogonal iff sum_i zeta^{p_ik - p_ij} vanishes.
    r.exact = true;
    r.unitary = true;
    for (int j = 0; j < L && r.unitary; ++j)
      for (int k = j + 1; k < L && r.unitary; ++k) {
        CyclotomicSum s(cw.root_order());
        for (int i = 0; i < L; ++i) s.add_power(cw.power(i, k) - cw.power(i, j));
        r.unitary = s.is_zero();
      }
  } else {
    r.unitary = r.residual < 1e-10;
  }
  return r;
}

int chi_rank(const SpinSystem& sys, const Character& chi) {
  const auto m = chi_of_matrix(chi, sys.w(), sys.group()).to_complex();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-9 * sv(0)) ++r;
  return r;
}

namespace {

std::string letter_name(int x) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('a' + x % 26));
    x = x / 26 - 1;
  } while (x >= 0);
  return s;
}

bool columns_are_permutations(const Substitution& s) {
  const int n = s.alphabet_size();
  for (int d = 0; d < s.digit_count(); ++d) {
    std::vector<char> hit(static_cast<std::size_t>(n), 0);
    for (int a = 0; a < n; ++a) hit[static_cast<std::size_t>(s.apply(a, d))] = 1;
    if (std::count(hit.begin(), hit.end(), 1) != n) return false;
  }
  return true;
}

}  // namespace

FactorSubstitution factor_substitution(const SpinSystem& sys, const Character& chi, const FactorOptions& opts) {
  const auto& g = sys.group();
  const int L = sys.digit_count();
  const auto cw = chi_of_matrix(chi, sys.w(), g);
  const int n = kernel(chi, g).quotient_order;
  const int step = g.exponent() / n;  // chi values are powers of zeta_N^step
  auto exp_n = [&](int i, int j) { return cw.power(i, j) / step; };

  const bool rank_one = !chi.is_trivial() && chi_rank(sys, chi) == 1;
  std::optional<Substitution> sub;
  std::optional<SpinSystem> spin_factor;
  if (rank_one) {
    // chi(W_i.) = zeta^{r_i} chi(W_0.), so g.d maps to chi(g) + r_d and
    // S(x, l) = x + w_{0l} + r_l.
    std::vector<int> r(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i) r[i] = ((exp_n(i, 0) - exp_n(0, 0)) % n + n) % n;
    std::vector<std::string> names;
    std::vector<int> table(static_cast<std::size_t>(n) * L);
    for (int x = 0; x < n; ++x) {
      names.push_back(letter_name(x));
      for (int l = 0; l < L; ++l) table[static_cast<std::size_t>(x) * L + l] = (x + exp_n(0, l) + r[l]) % n;
    }
    sub.emplace(sys.digits(), std::move(names), std::move(table));
  } else {
    std::vector<GroupElement> entries;
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j) entries.push_back(n > 1 ? GroupElement{exp_n(i, j)} : GroupElement{});
    spin_factor.emplace(sys.digits(), AbelianGroup(n > 1 ? std::vector<int>{n} : std::vector<int>{}),
                        SpinMatrix(L, std::move(entries)));
    sub.emplace(spin_factor->as_substitution());
  }

  int level = 0;
  std::size_t cells = 1;
  while (cells * static_cast<std::size_t>(L) <= opts.cell_budget) {
    cells *= static_cast<std::size_t>(L);
    ++level;
  }
  const int radius = opts.radius > 0 ? opts.radius : (sys.digits().dim() == 1 ? 64 : 8);
  auto periodicity = periodicity_heuristic(*sub, level, radius);
  const bool bijective = columns_are_permutations(*sub);
  return FactorSubstitution{chi, n, rank_one, std::move(*sub), std::move(spin_factor), bijective, periodicity};
}

BerlinkovSolomyak berlinkov_solomyak_check(const Eigen::MatrixXi& m, int length, int dim) {
  BerlinkovSolomyak r;
  r.applicable = dim == 1;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m.cast<double>(), false);
  const double target = std::sqrt(static_cast<double>(length));
  r.closest_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double mod = std::abs(es.eigenvalues()(i));
    r.moduli.push_back(mod);
    r.closest_gap = std::min(r.closest_gap, std::abs(mod - target));
  }
  std::sort(r.moduli.begin(), r.moduli.end());
  r.passes = r.closest_gap > 1e-6;
  return r;
}

const char* verdict_name(VerdictType t) {
  switch (t) {
    case VerdictType::PurePointOdometer: return "pure-point-odometer";
    case VerdictType::Lebesgue: return "lebesgue";
    case VerdictType::Singular: return "singular";
    case VerdictType::SingularContinuous: return "singular-continuous";
    case VerdictType::SingularByLyapunov: return "singular-by-lyapunov";
    case VerdictType::Undetermined: return "undetermined";
  }
  return "undetermined";
}

namespace {

bool try_lyapunov(SpectralVerdict& v, const FourierBlock& block, const ClassifyOptions& opts, bool rank_deficient) {
  auto lo = opts.lyapunov;
  lo.allow_rank_deficient = rank_deficient;
  for (int n : opts.lyapunov_n) {
    v.lyapunov.push_back(lyapunov_bound(block, n, lo));
    if (v.lyapunov.back().singular) {
      v.type = VerdictType::SingularByLyapunov;
      v.test = "lyapunov N=" + std::to_string(n);
      return true;
    }
  }
  return false;
}

}  // namespace

SpectralReport classify(const SpinSystem& sys, const ClassifyOptions& opts) {
  const auto sub = sys.as_substitution();
  SpectralReport rep;
  rep.primitivity = primitivity(sub);
  if (!rep.primitivity.primitive) {
    throw Error(ErrorCode::NotPrimitive,
                "substitution is not primitive: no power of the substitution matrix up to |A|^2 is positive; "
                "spin classes do not mix");
  }
  const int L = sys.digit_count();
  const int m = sys.digits().dim();
  const auto M = substitution_matrix(sub);
  std::optional<BerlinkovSolomyak> whole_bs;
  auto system_bs = [&]() -> const BerlinkovSolomyak& {
    if (!whole_bs) whole_bs = berlinkov_solomyak_check(M, L, m);
    return *whole_bs;
  };

  const auto chars = enumerate_characters(sys.group());
  for (std::size_t c = 0; c < chars.size(); ++c) {
    SpectralVerdict v;
    v.chi = chars[c];
    v.index = static_cast<int>(c);
    v.rank = chi_rank(sys, v.chi);
    v.unitarity = is_chi_unitary(sys, v.chi);

    if (v.chi.is_trivial()) {
      v.type = VerdictType::PurePointOdometer;
      v.test = "trivial character";
      v.eigenvalues = odometer_eigenvalues(sys.digits(), 1);
    } else if (v.unitarity.unitary) {
      v.type = VerdictType::Lebesgue;
      v.multiplicity = L;
      v.test = v.unitarity.exact ? "chi-unitary (exact)" : "chi-unitary (numerical)";
    } else if (v.rank == 1) {
      const auto f = factor_substitution(sys, v.chi, opts.factor);
      v.multiplicity_bound = f.quotient_order;
      v.periodicity = f.periodicity;
      v.type = VerdictType::Singular;
      v.test = "chi-rank-1 bijective factor";
      if (!f.periodicity.periodic_candidate && opts.assert_aperiodic) {
        v.type = VerdictType::SingularContinuous;
        v.notes.push_back("no period found by the heuristic scan and aperiodicity asserted");
      } else if (!f.periodicity.periodic_candidate) {
        v.notes.push_back("no period found, aperiodicity not asserted: pure point or singular continuous");
      } else {
        v.notes.push_back("factor is a periodic candidate");
      }
    } else if (v.rank == L) {
      if (!try_lyapunov(v, fourier_block(sys, v.chi), opts, false)) {
        if (m == 1 && system_bs().passes) {
          v.type = VerdictType::Singular;
          v.test = "berlinkov-solomyak";
          v.bs = system_bs();
        } else {
          v.type = VerdictType::Undetermined;
          v.test = "lyapunov bounds above threshold";
          if (m == 1) v.bs = system_bs();
        }
      }
    } else {
      const auto f = factor_substitution(sys, v.chi, opts.factor);
      v.periodicity = f.periodicity;
      v.notes.push_back("intermediate rank: analysed through the factor over C_" + std::to_string(f.quotient_order));
      const auto fbs = berlinkov_solomyak_check(substitution_matrix(f.substitution), L, m);
      if (m == 1 && fbs.passes) {
        v.type = VerdictType::Singular;
        v.test = "berlinkov-solomyak on factor";
        v.bs = fbs;
      } else if (!try_lyapunov(v, fourier_block(*f.spin_factor, Character{{1}}), opts, true)) {
        v.type = VerdictType::Undetermined;
        v.test = "factor lyapunov bounds above threshold";
        if (m == 1) v.bs = fbs;
      }
    }
    if (v.type == VerdictType::Lebesgue) {
      rep.total_lebesgue_multiplicity += v.multiplicity;
      ++rep.unitary_characters;
    }
    rep.verdicts.push_back(std::move(v));
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(M.cast<double>(), false);
  const double target = std::sqrt(static_cast<double>(L));
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(std::abs(es.eigenvalues()(i)) - target) <= 1e-6) ++rep.sqrt_l_eigenvalues;
  rep.unitary_times_l = rep.unitary_characters * L;
  return rep;
}

}  // namespace spinsub
