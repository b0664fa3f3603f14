#include "spinsub/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace spinsub {

Substitution::Substitution(DigitSystem digits, std::vector<std::string> alphabet, std::vector<int> table)
    : digits_(std::move(digits)), alphabet_(std::move(alphabet)), table_(std::move(table)) {
  if (alphabet_.empty()) throw Error(ErrorCode::InvalidArgument, "alphabet is empty");
  if (table_.size() != alphabet_.size() * static_cast<std::size_t>(digits_.size())) {
    throw Error(ErrorCode::InvalidArgument, "substitution table must have one letter per (letter, digit)");
  }
  for (int v : table_)
    if (v < 0 || v >= alphabet_size()) throw Error(ErrorCode::InvalidArgument, "substitution table letter out of range");
}

int Substitution::letter_index(const std::string& name) const {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), name);
  if (it == alphabet_.end()) throw Error(ErrorCode::InvalidArgument, "unknown letter '" + name + "'");
  return static_cast<int>(it - alphabet_.begin());
}

SpinSystem::SpinSystem(DigitSystem digits, AbelianGroup group, SpinMatrix w)
    : digits_(std::move(digits)), group_(std::move(group)), w_(std::move(w)) {
  if (w_.size() != digits_.size()) {
    throw Error(ErrorCode::InvalidArgument, "spin matrix is " + std::to_string(w_.size()) + "x" +
                                                std::to_string(w_.size()) + " but there are " +
                                                std::to_string(digits_.size()) + " digits");
  }
  for (const auto& g : w_.entries()) {
    if (!group_.contains(g)) throw Error(ErrorCode::InvalidArgument, "spin matrix entry is not a group element");
    w_index_.push_back(group_.index_of(g));
  }
}

std::string SpinSystem::letter_name(Letter a) const {
  std::string s;
  if (a.spin != 0) {
    const auto g = group_.element_at(a.spin);
    s += "(";
    for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
    s += ")";
  }
  return s + "d" + std::to_string(a.digit);
}

Letter SpinSystem::substitute_letter(Letter a, int d) const {
  return {group_.multiply_index(a.spin, w_index(a.digit, d)), d};
}

Substitution SpinSystem::as_substitution() const {
  const int n = alphabet_size();
  const int L = digit_count();
  std::vector<std::string> names;
  std::vector<int> table(static_cast<std::size_t>(n) * L);
  for (int i = 0; i < n; ++i) {
    names.push_back(letter_name(letter_at(i)));
    for (int d = 0; d < L; ++d) table[static_cast<std::size_t>(i) * L + d] = letter_index(substitute_letter(letter_at(i), d));
  }
  return {digits_, std::move(names), std::move(table)};
}

namespace {

void fuse(const Substitution& s, int a, int n, std::size_t block, int* out) {
  if (n == 0) {
    *out = a;
    return;
  }
  const std::size_t sub = block / static_cast<std::size_t>(s.digit_count());
  for (int d = 0; d < s.digit_count(); ++d) fuse(s, s.apply(a, d), n - 1, sub, out + d * sub);
}

}  // namespace

Supertile supertile(const Substitution& s, int a, int n) {
  const auto count = s.digits().checked_count(n);
  Supertile t{n, a, std::vector<int>(count)};
  fuse(s, a, n, count, t.cells.data());
  return t;
}

Supertile supertile_by_substitution(const Substitution& s, int a, int n) {
  s.digits().checked_count(n);
  const auto L = static_cast<std::size_t>(s.digit_count());
  std::vector<int> cells{a};
  for (int level = 0; level < n; ++level) {
    std::vector<int> next(cells.size() * L);
    for (std::size_t r = 0; r < cells.size(); ++r)
      for (std::size_t d = 0; d < L; ++d) next[d + L * r] = s.apply(cells[r], static_cast<int>(d));
    cells = std::move(next);
  }
  return {n, a, std::move(cells)};
}

int supertile_spin_at(const SpinSystem& sys, Letter a, const DigitString& i) {
  const auto& g = sys.group();
  int spin = a.spin;
  int parent = a.digit;
  for (auto it = i.rbegin(); it != i.rend(); ++it) {
    spin = g.multiply_index(spin, sys.w_index(parent, *it));
    parent = *it;
  }
  return spin;
}

Eigen::MatrixXi substitution_matrix(const Substitution& s) {
  const int n = s.alphabet_size();
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int d = 0; d < s.digit_count(); ++d) ++m(s.apply(j, d), j);
  return m;
}

Primitivity primitivity(const Eigen::MatrixXi& m) {
  const int n = static_cast<int>(m.rows());
  const int words = (n + 63) / 64;
  using Rows = std::vector<std::uint64_t>;
  auto make = [&] { return Rows(static_cast<std::size_t>(n) * words, 0); };
  auto set = [&](Rows& r, int i, int j) { r[static_cast<std::size_t>(i) * words + j / 64] |= 1ull << (j % 64); };
  auto get = [&](const Rows& r, int i, int j) { return (r[static_cast<std::size_t>(i) * words + j / 64] >> (j % 64)) & 1ull; };
  Rows base = make();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m(i, j) > 0) set(base, i, j);
  auto full = [&](const Rows& r) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!get(r, i, j)) return false;
    return true;
  };
  Rows power = base;
  const long limit = static_cast<long>(n) * n;
  for (long p = 1; p <= limit; ++p) {
    if (full(power)) return {true, static_cast<int>(p)};
    // power <- power * base: row i of the product is the OR of base rows k with power(i,k).
    Rows next = make();
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (get(power, i, k))
          for (int w = 0; w < words; ++w)
            next[static_cast<std::size_t>(i) * words + w] |= base[static_cast<std::size_t>(k) * words + w];
    if (next == power) break;
    power = std::move(next);
  }
  return {false, 0};
}

Primitivity primitivity(const Substitution& s) { return primitivity(substitution_matrix(s)); }

Eigen::VectorXd letter_frequencies(const Substitution& s) {
  const Eigen::MatrixXd m = substitution_matrix(s).cast<double>();
  const int n = static_cast<int>(m.rows());
  const Eigen::MatrixXd shifted = m - static_cast<double>(s.digit_count()) * Eigen::MatrixXd::Identity(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(shifted);
  Eigen::MatrixXd ker = lu.kernel();
  Eigen::VectorXd v = ker.col(0);
  if (v.sum() < 0) v = -v;
  return v / v.sum();
}

SpatialPatch::SpatialPatch(const DigitSystem& digits, const Supertile& tile) {
  const auto dom = digits.digit_domain(tile.level);
  auto [lo, hi] = dom.bounds();
  lo_ = lo;
  hi_ = hi;
  const int m = dim();
  extent_.resize(m);
  strides_.resize(m);
  std::size_t total = 1;
  for (int c = 0; c < m; ++c) {
    extent_[c] = hi_[c] - lo_[c] + 1;
    strides_[c] = static_cast<std::int64_t>(total);
    total *= static_cast<std::size_t>(extent_[c]);
  }
  if (total > 16 * digits.max_cells()) {
    throw Error(ErrorCode::DomainTooLarge, "bounding box of the patch is too large");
  }
  grid_.assign(total, -1);
  for (std::size_t i = 0; i < dom.size(); ++i) grid_[static_cast<std::size_t>(offset(dom.point(i)))] = tile.cells[i];
  cell_count_ = dom.size();
}

std::int64_t SpatialPatch::offset(std::span<const std::int64_t> x) const {
  std::int64_t off = 0;
  for (int c = 0; c < dim(); ++c) {
    const auto r = x[c] - lo_[c];
    if (r < 0 || r >= extent_[c]) return -1;
    off += r * strides_[c];
  }
  return off;
}

int SpatialPatch::at(std::span<const std::int64_t> x) const {
  const auto off = offset(x);
  return off < 0 ? -1 : grid_[static_cast<std::size_t>(off)];
}

std::set<Word> sample_rectangular_words(const Substitution& s, const std::vector<int>& shape, int n) {
  const int m = s.digits().dim();
  if (static_cast<int>(shape.size()) != m) throw Error(ErrorCode::InvalidArgument, "word shape must have one extent per axis");
  std::vector<IntVec> box;
  {
    IntVec v(static_cast<std::size_t>(m), 0);
    std::function<void(int)> rec = [&](int c) {
      if (c == m) {
        box.push_back(v);
        return;
      }
      for (int t = 0; t < shape[c]; ++t) {
        v[c] = t;
        rec(c + 1);
      }
    };
    rec(0);
  }
  std::set<Word> words;
  const auto dom = s.digits().digit_domain(n);
  for (int a = 0; a < s.alphabet_size(); ++a) {
    const SpatialPatch patch(s.digits(), supertile(s, a, n));
    Word w(box.size());
    for (std::size_t i = 0; i < dom.size(); ++i) {
      const auto base = dom.at(i);
      bool inside = true;
      for (std::size_t b = 0; b < box.size() && inside; ++b) {
        w[b] = patch.at(add(base, box[b]));
        inside = w[b] >= 0;
      }
      if (inside) words.insert(w);
    }
  }
  return words;
}

SpinSystem kronecker_compose(const SpinSystem& s1, const SpinSystem& s2, const IntMatrix& q,
                             const std::vector<IntVec>& digits) {
  const int l1 = s1.digit_count();
  const int l2 = s2.digit_count();
  if (static_cast<int>(digits.size()) != l1 * l2) {
    throw Error(ErrorCode::InvalidArgument, "Kronecker product needs |D| = |D1| |D2|");
  }
  auto ds = DigitSystem::create(q, digits, s1.digits().max_cells());
  std::vector<int> orders = s1.group().orders();
  orders.insert(orders.end(), s2.group().orders().begin(), s2.group().orders().end());
  AbelianGroup g(orders);
  const int L = l1 * l2;
  std::vector<GroupElement> entries;
  entries.reserve(static_cast<std::size_t>(L) * L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      GroupElement e = s1.w()(i / l2, j / l2);
      const auto& e2 = s2.w()(i % l2, j % l2);
      e.insert(e.end(), e2.begin(), e2.end());
      entries.push_back(std::move(e));
    }
  return {std::move(ds), std::move(g), SpinMatrix(L, std::move(entries))};
}

PeriodicityResult periodicity_heuristic(const Substitution& s, int n, int radius, int seed_letter) {
  PeriodicityResult res;
  res.radius = radius;
  res.level = n;
  const SpatialPatch patch(s.digits(), supertile(s, seed_letter, n));
  const int m = patch.dim();

  // Central half of the bounding box.
  IntVec clo(static_cast<std::size_t>(m)), chi(static_cast<std::size_t>(m));
  for (int c = 0; c < m; ++c) {
    const auto w = patch.extent()[c];
    clo[c] = patch.lo()[c] + w / 4;
    chi[c] = patch.hi()[c] - w / 4;
  }
  std::vector<IntVec> region;
  {
    const auto dom = s.digits().digit_domain(n);
    for (std::size_t i = 0; i < dom.size(); ++i) {
      auto p = dom.point(i);
      bool inside = true;
      for (int c = 0; c < m && inside; ++c) inside = p[c] >= clo[c] && p[c] <= chi[c];
      if (inside) region.push_back(dom.at(i));
    }
  }
  res.checked_cells = region.size();
  if (region.empty()) return res;

  // Candidates in the half-space whose first nonzero coordinate is positive,
  // ordered by max-norm then lexicographically.
  std::vector<IntVec> candidates;
  {
    IntVec v(static_cast<std::size_t>(m), 0);
    std::function<void(int)> rec = [&](int c) {
      if (c == m) {
        for (auto x : v) {
          if (x > 0) {
            candidates.push_back(v);
            return;
          }
          if (x < 0) return;
        }
        return;
      }
      for (int t = -radius; t <= radius; ++t) {
        v[c] = t;
        rec(c + 1);
      }
    };
    rec(0);
  }
  auto norm = [](const IntVec& v) {
    std::int64_t r = 0;
    for (auto x : v) r = std::max(r, x < 0 ? -x : x);
    return r;
  };
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const IntVec& a, const IntVec& b) { return norm(a) != norm(b) ? norm(a) < norm(b) : a < b; });

  for (const auto& v : candidates) {
    std::size_t compared = 0;
    bool invariant = true;
    for (const auto& p : region) {
      const int other = patch.at(add(p, v));
      if (other < 0) continue;
      ++compared;
      if (other != patch.at(p)) {
        invariant = false;
        break;
      }
    }
    if (invariant && compared > 0) {
      res.periodic_candidate = true;
      res.period = v;
      return res;
    }
  }
  return res;
}

}  // namespace spinsub
