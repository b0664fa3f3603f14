#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "spinsub/classifier.hpp"

using namespace spinsub;

namespace {

SpinSystem spin(const char* name) { return load_config(oracle::fixture(name)).spin_system(); }

}  // namespace

TEST_CASE("is_chi_unitary and chi_rank") {
  const auto v = spin("vierdrachen");
  CHECK(is_chi_unitary(v, Character{{0, 1}}).unitary);
  CHECK(is_chi_unitary(v, Character{{1, 1}}).unitary);
  CHECK(is_chi_unitary(v, Character{{0, 1}}).exact);
  CHECK_FALSE(is_chi_unitary(v, Character{{0, 0}}).unitary);
  CHECK_FALSE(is_chi_unitary(v, Character{{1, 0}}).unitary);
  CHECK(chi_rank(v, Character{{1, 0}}) == 1);

  const auto c4 = spin("c4");
  CHECK(is_chi_unitary(c4, Character{{2}}).unitary);
  CHECK_FALSE(is_chi_unitary(c4, Character{{1}}).unitary);

  CHECK(chi_rank(spin("pp_factor"), Character{{2}}) == 1);
  CHECK(chi_rank(spin("rudin_shapiro"), Character{{1}}) == 2);

  for (const char* f : {"rudin_shapiro", "triomino", "vierdrachen", "pp_factor", "c4", "rs_kron"}) {
    const auto sys = spin(f);
    for (const auto& chi : enumerate_characters(sys.group())) {
      const auto u = is_chi_unitary(sys, chi);
      const int r = chi_rank(sys, chi);
      // Independent rank by elimination on chi(W).
      CHECK(r == oracle::gauss_rank(chi_of_matrix(chi, sys.w(), sys.group()).to_complex()));
      if (u.unitary) CHECK(r == sys.digit_count());
      CHECK(u.unitary == (u.residual < 1e-9));
    }
  }
}

TEST_CASE("factor_substitution") {
  const auto pp = spin("pp_factor");
  const auto f = factor_substitution(pp, Character{{2}});
  CHECK(f.rank_one);
  CHECK(f.quotient_order == 2);
  REQUIRE(f.substitution.alphabet_size() == 2);
  const int a = f.substitution.letter_index("a"), b = f.substitution.letter_index("b");
  CHECK(f.substitution.apply(a, 0) == a);
  CHECK(f.substitution.apply(a, 1) == b);
  CHECK(f.substitution.apply(a, 2) == a);
  CHECK(f.substitution.apply(b, 0) == b);
  CHECK(f.substitution.apply(b, 1) == a);
  CHECK(f.substitution.apply(b, 2) == b);
  CHECK(f.bijective);
  CHECK(f.periodicity.periodic_candidate);

  const auto v = spin("vierdrachen");
  const auto fv = factor_substitution(v, Character{{1, 0}});
  CHECK(fv.rank_one);
  CHECK(fv.substitution.alphabet_size() == 2);
  CHECK(fv.bijective);
  CHECK_FALSE(fv.periodicity.periodic_candidate);
  // Bijective: every column of the table permutes the factor alphabet.
  for (int d = 0; d < fv.substitution.digit_count(); ++d) {
    std::vector<int> col;
    for (int x = 0; x < fv.substitution.alphabet_size(); ++x) col.push_back(fv.substitution.apply(x, d));
    std::sort(col.begin(), col.end());
    CHECK(col == std::vector<int>{0, 1});
  }

  const auto trivial = factor_substitution(v, Character{{0, 0}});
  CHECK(trivial.quotient_order == 1);
  CHECK(trivial.substitution.alphabet_size() == v.digit_count());
  for (int x = 0; x < trivial.substitution.alphabet_size(); ++x)
    for (int d = 0; d < v.digit_count(); ++d) CHECK(trivial.substitution.apply(x, d) == d);
}

TEST_CASE("berlinkov_solomyak_check") {
  const auto pp = load_config(oracle::fixture("pp_factor")).substitution();
  const auto r = berlinkov_solomyak_check(substitution_matrix(pp), 3);
  CHECK(r.passes);
  CHECK(r.closest_gap > 1e-3);

  const auto rs = load_config(oracle::fixture("rudin_shapiro")).substitution();
  const auto m = substitution_matrix(rs);
  CHECK_FALSE(berlinkov_solomyak_check(m, 2).passes);
  const auto ref = oracle::eigen_moduli(m);
  CHECK(std::count_if(ref.begin(), ref.end(), [](double x) { return std::abs(x - std::sqrt(2.0)) < 1e-9; }) == 2);

  // Identity spins: two decoupled all-ones blocks, eigenvalues {2, 2, 0, 0}.
  const auto ds = DigitSystem::create(IntMatrix(1, 1, {2}), {{0}, {1}});
  const SpinSystem frozen(ds, AbelianGroup({2}), SpinMatrix(2, {{0}, {0}, {0}, {0}}));
  CHECK(berlinkov_solomyak_check(substitution_matrix(frozen.as_substitution()), 2).passes);
  CHECK_FALSE(berlinkov_solomyak_check(m, 2, 2).applicable);
}

TEST_CASE("classify") {
  SUBCASE("vierdrachen") {
    ClassifyOptions o;
    o.assert_aperiodic = true;
    const auto r = classify(spin("vierdrachen"), o);
    REQUIRE(r.verdicts.size() == 4);
    CHECK(r.verdicts[0].type == VerdictType::PurePointOdometer);
    CHECK(r.verdicts[1].type == VerdictType::Lebesgue);
    CHECK(r.verdicts[2].type == VerdictType::SingularContinuous);
    CHECK(r.verdicts[3].type == VerdictType::Lebesgue);
    CHECK(r.total_lebesgue_multiplicity == 4);
    CHECK(r.unitary_characters == 2);
    CHECK(r.unitary_times_l == 4);

    o.assert_aperiodic = false;
    CHECK(classify(spin("vierdrachen"), o).verdicts[2].type == VerdictType::Singular);
  }

  SUBCASE("triomino") {
    const auto r = classify(spin("triomino"));
    REQUIRE(r.verdicts.size() == 3);
    CHECK(r.verdicts[0].type == VerdictType::PurePointOdometer);
    CHECK(r.verdicts[1].type == VerdictType::Lebesgue);
    CHECK(r.verdicts[2].type == VerdictType::Lebesgue);
    CHECK(r.total_lebesgue_multiplicity == 6);
  }

  SUBCASE("c4") {
    ClassifyOptions o;
    o.lyapunov_n = {12};
    const auto r = classify(spin("c4"), o);
    REQUIRE(r.verdicts.size() == 4);
    CHECK(r.verdicts[0].type == VerdictType::PurePointOdometer);
    CHECK(r.verdicts[1].type == VerdictType::SingularByLyapunov);
    CHECK(r.verdicts[2].type == VerdictType::Lebesgue);
    CHECK(r.verdicts[3].type == VerdictType::SingularByLyapunov);
    CHECK(r.verdicts[1].lyapunov.size() == 1);
  }

  SUBCASE("multiplicity accounting and determinism") {
    for (const char* f : {"rudin_shapiro", "triomino", "pp_factor", "rs_kron"}) {
      const auto sys = spin(f);
      const auto r = classify(sys);
      const auto again = classify(sys);
      int sum = 0;
      for (const auto& v : r.verdicts) {
        if (v.unitarity.unitary) sum += sys.digit_count();
        CHECK(v.type == again.verdicts[static_cast<std::size_t>(v.index)].type);
        CHECK(v.lyapunov.size() == again.verdicts[static_cast<std::size_t>(v.index)].lyapunov.size());
      }
      CHECK(sum == r.total_lebesgue_multiplicity);
      CHECK(r.verdicts[0].type == VerdictType::PurePointOdometer);
    }
  }

  SUBCASE("non-primitive systems are refused") {
    const auto ds = DigitSystem::create(IntMatrix(1, 1, {2}), {{0}, {1}});
    const SpinSystem frozen(ds, AbelianGroup({2}), SpinMatrix(2, {{0}, {0}, {0}, {0}}));
    try {
      classify(frozen);
      FAIL("expected refusal");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotPrimitive);
    }
  }
}
