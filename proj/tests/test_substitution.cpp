#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "spinsub/config.hpp"
#include "spinsub/substitution.hpp"

using namespace spinsub;

namespace {

const char* kSpinFixtures[] = {"rudin_shapiro", "triomino", "vierdrachen", "pp_factor", "c4", "rs_kron"};

}  // namespace

TEST_CASE("substitute_letter") {
  const auto rs = load_config(oracle::fixture("rudin_shapiro")).spin_system();
  CHECK(rs.substitute_letter({0, 0}, 1) == Letter{0, 1});
  CHECK(rs.substitute_letter({0, 1}, 1) == Letter{1, 1});

  const auto tri = load_config(oracle::fixture("triomino")).spin_system();
  CHECK(tri.substitute_letter({0, 1}, 0) == Letter{0, 0});
  CHECK(tri.substitute_letter({0, 1}, 1) == Letter{1, 1});
  CHECK(tri.substitute_letter({0, 1}, 2) == Letter{2, 2});

  std::mt19937 rng(11);
  for (const char* f : kSpinFixtures) {
    const auto sys = load_config(oracle::fixture(f)).spin_system();
    for (int t = 0; t < 100; ++t) {
      const int g = static_cast<int>(rng() % sys.group().order());
      const Letter a = sys.letter_at(static_cast<int>(rng() % sys.alphabet_size()));
      const int d = static_cast<int>(rng() % sys.digit_count());
      CHECK(sys.substitute_letter(sys.act(g, a), d) == sys.act(g, sys.substitute_letter(a, d)));
    }
  }
}

TEST_CASE("supertile") {
  const auto rs = load_config(oracle::fixture("rudin_shapiro")).spin_system();
  const auto sub = rs.as_substitution();
  const auto t2 = supertile(sub, rs.letter_index({0, 0}), 2);
  std::vector<int> spins;
  for (int c : t2.cells) spins.push_back(rs.letter_at(c).spin);
  CHECK(spins == std::vector<int>{0, 0, 0, 1});

  const auto t0 = supertile(sub, 3, 0);
  CHECK(t0.cells == std::vector<int>{3});

  for (const char* f : kSpinFixtures) {
    CAPTURE(f);
    const auto sys = load_config(oracle::fixture(f)).spin_system();
    const auto s = sys.as_substitution();
    const int L = sys.digit_count();
    for (int a = 0; a < s.alphabet_size(); ++a)
      for (int n = 0; n <= 4; ++n) {
        const auto fused = supertile(s, a, n);
        CHECK(fused.cells == supertile_by_substitution(s, a, n).cells);
        // Digit tracking: the digit of a cell is the least significant digit of its index.
        if (n > 0)
          for (std::size_t i = 0; i < fused.cells.size(); ++i)
            CHECK(sys.letter_at(fused.cells[i]).digit == static_cast<int>(i % L));
        // Equivariance: the supertile of g.a is g times the supertile of a.
        for (int g = 0; g < sys.group().order(); ++g) {
          const auto shifted = supertile(s, sys.letter_index(sys.act(g, sys.letter_at(a))), n);
          for (std::size_t i = 0; i < fused.cells.size(); ++i)
            CHECK(shifted.cells[i] == sys.letter_index(sys.act(g, sys.letter_at(fused.cells[i]))));
        }
      }
  }
}

TEST_CASE("supertile_spin_at") {
  const auto rs = load_config(oracle::fixture("rudin_shapiro")).spin_system();
  CHECK(supertile_spin_at(rs, {0, 0}, {1, 1}) == 1);
  CHECK(supertile_spin_at(rs, {1, 0}, {}) == 1);
  const auto pp = load_config(oracle::fixture("pp_factor")).spin_system();
  CHECK(supertile_spin_at(pp, {0, 2}, {0, 0, 0, 0}) == 0);

  const auto v = load_config(oracle::fixture("vierdrachen")).spin_system();
  const auto tile = supertile(v.as_substitution(), v.letter_index({0, 0}), 2);
  // i = (1, 0): index 1; W(d0, d0) W(d0, d1) = e a = a.
  CHECK(supertile_spin_at(v, {0, 0}, {1, 0}) == v.letter_at(tile.cells[1]).spin);
  CHECK(v.group().element_at(supertile_spin_at(v, {0, 0}, {1, 0})) == GroupElement{1, 0});
}

TEST_CASE("substitution matrix, primitivity, frequencies") {
  for (const char* f : {"rudin_shapiro", "triomino", "vierdrachen", "pp_factor", "c4", "rs_kron", "gasket"}) {
    CAPTURE(f);
    const auto cfg = load_config(oracle::fixture(f));
    const auto m = substitution_matrix(cfg.substitution());
    for (int j = 0; j < m.cols(); ++j) CHECK(m.col(j).sum() == cfg.substitution().digit_count());
    const auto p = primitivity(cfg.substitution());
    CHECK(p.primitive);
    const auto freq = letter_frequencies(cfg.substitution());
    const auto ref = oracle::power_iteration(m, cfg.substitution().digit_count());
    CHECK((freq - ref).cwiseAbs().maxCoeff() < 1e-9);
  }
  const auto rs = load_config(oracle::fixture("rudin_shapiro")).substitution();
  CHECK((letter_frequencies(rs).array() - 0.25).abs().maxCoeff() < 1e-12);
  const auto tri = load_config(oracle::fixture("triomino")).substitution();
  CHECK((letter_frequencies(tri).array() - 1.0 / 9).abs().maxCoeff() < 1e-12);

  // Identity spins never mix spin classes.
  const auto ds = DigitSystem::create(IntMatrix(1, 1, {2}), {{0}, {1}});
  const SpinSystem frozen(ds, AbelianGroup({2}), SpinMatrix(2, {{0}, {0}, {0}, {0}}));
  const auto fp = primitivity(frozen.as_substitution());
  CHECK_FALSE(fp.primitive);
  CHECK(fp.power == 0);
}

TEST_CASE("sample_rectangular_words") {
  const auto gasket = load_config(oracle::fixture("gasket")).substitution();
  const auto words = sample_rectangular_words(gasket, {2, 2}, 3);
  CHECK_FALSE(words.empty());

  const auto tri = load_config(oracle::fixture("triomino")).substitution();
  const auto p = primitivity(tri);
  CHECK(sample_rectangular_words(tri, {1, 1}, p.power).size() == static_cast<std::size_t>(tri.alphabet_size()));

  // RS length-4 words against an exhaustive scan of the letter sequences.
  const auto rs = load_config(oracle::fixture("rudin_shapiro")).substitution();
  const auto w4 = sample_rectangular_words(rs, {4}, 4);
  std::set<Word> ref;
  for (int a = 0; a < rs.alphabet_size(); ++a) {
    std::vector<int> seq{a};
    for (int n = 0; n < 4; ++n) {
      std::vector<int> next;
      for (int x : seq)
        for (int d = 0; d < 2; ++d) next.push_back(rs.apply(x, d));
      seq = next;
    }
    for (std::size_t i = 0; i + 4 <= seq.size(); ++i) ref.insert(Word(seq.begin() + i, seq.begin() + i + 4));
  }
  CHECK(w4 == ref);
  // Projected to spins the words are +-1 strings of length 4.
  const auto rs_sys = load_config(oracle::fixture("rudin_shapiro")).spin_system();
  std::set<std::vector<int>> spin_words;
  for (const auto& w : w4) {
    std::vector<int> sw;
    for (int x : w) sw.push_back(rs_sys.letter_at(x).spin);
    spin_words.insert(sw);
  }
  CHECK(spin_words.size() <= 16);
}

TEST_CASE("kronecker_compose") {
  const auto rs = load_config(oracle::fixture("rudin_shapiro")).spin_system();
  const auto k = kronecker_compose(rs, rs, IntMatrix(1, 1, {4}), {{0}, {1}, {2}, {3}});
  CHECK(k.digit_count() == 4);
  CHECK(k.group().orders() == std::vector<int>{2, 2});
  CHECK(primitivity(k.as_substitution()).primitive);
  CHECK(k.w()(3, 3) == GroupElement{1, 1});
  CHECK(k.w()(2, 1) == GroupElement{0, 0});
  CHECK_THROWS_AS(kronecker_compose(rs, rs, IntMatrix(1, 1, {2}), {{0}, {1}}), Error);
}

TEST_CASE("periodicity_heuristic") {
  const auto p2 = load_config(oracle::fixture("period2")).substitution();
  const auto r = periodicity_heuristic(p2, 6, 16);
  CHECK(r.periodic_candidate);
  CHECK(r.period == IntVec{2});

  const auto rs = load_config(oracle::fixture("rudin_shapiro")).substitution();
  CHECK_FALSE(periodicity_heuristic(rs, 10, 64).periodic_candidate);

  const auto ds = DigitSystem::create(IntMatrix(1, 1, {2}), {{0}, {1}});
  const Substitution constant(ds, {"a"}, {0, 0});
  const auto c = periodicity_heuristic(constant, 6, 8);
  CHECK(c.periodic_candidate);
  CHECK(c.period == IntVec{1});
}
