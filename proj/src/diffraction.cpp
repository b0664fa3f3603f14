#include "spinsub/diffraction.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>

#include "spinsub/classifier.hpp"

namespace spinsub {

namespace {

WeightedPatch layout(const DigitSystem& ds, const Supertile& tile,
                     const std::function<std::complex<double>(int)>& weight) {
  const SpatialPatch sp(ds, tile);
  WeightedPatch wp;
  wp.level = tile.level;
  wp.lo = sp.lo();
  wp.cells = sp.cell_count();
  for (auto e : sp.extent()) wp.grid.extent.push_back(static_cast<long>(e));
  wp.grid.weights.assign(sp.grid().size(), 0.0);
  wp.grid.inside.assign(sp.grid().size(), 0);
  for (std::size_t i = 0; i < sp.grid().size(); ++i) {
    const int letter = sp.grid()[i];
    if (letter < 0) continue;
    wp.grid.inside[i] = 1;
    wp.grid.weights[i] = weight(letter);
  }
  return wp;
}

}  // namespace

WeightedPatch make_weighted_patch(const SpinSystem& sys, Letter seed, int n, const Character& chi,
                                  std::optional<int> digit_class) {
  const auto sub = sys.as_substitution();
  const auto tile = supertile(sub, sys.letter_index(seed), n);
  const auto& g = sys.group();
  return layout(sys.digits(), tile, [&](int letter) -> std::complex<double> {
    const auto a = sys.letter_at(letter);
    if (digit_class && a.digit != *digit_class) return 0.0;
    return g.value(chi, g.element_at(a.spin));
  });
}

WeightedPatch make_weighted_patch(const Substitution& s, int seed, int n,
                                  const std::vector<std::complex<double>>& letter_weights) {
  if (static_cast<int>(letter_weights.size()) != s.alphabet_size()) {
    throw Error(ErrorCode::InvalidArgument, "need one weight per letter");
  }
  return layout(s.digits(), supertile(s, seed, n),
                [&](int letter) { return letter_weights[static_cast<std::size_t>(letter)]; });
}

std::complex<double> AutocorrelationTable::at(const IntVec& j) const {
  auto it = std::find(lags.begin(), lags.end(), j);
  if (it == lags.end()) throw Error(ErrorCode::InvalidArgument, "lag outside the table");
  return eta[static_cast<std::size_t>(it - lags.begin())];
}

double AutocorrelationTable::max_off_origin() const {
  double best = 0;
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (std::all_of(lags[i].begin(), lags[i].end(), [](std::int64_t x) { return x == 0; })) continue;
    best = std::max(best, std::abs(eta[i]));
  }
  return best;
}

AutocorrelationTable autocorrelation(const WeightedPatch& patch, int radius, bool parallel) {
  if (radius < 0) throw Error(ErrorCode::InvalidArgument, "radius must be nonnegative");
  for (auto e : patch.grid.extent) {
    if (2L * radius >= e && e > 1) {
      throw Error(ErrorCode::InvalidArgument, "radius " + std::to_string(radius) +
                                                  " is too large for a patch of extent " + std::to_string(e));
    }
  }
  AutocorrelationTable t;
  t.radius = radius;
  t.normalization = patch.cells;
  const int m = static_cast<int>(patch.grid.extent.size());
  std::vector<std::vector<long>> lags;
  {
    std::vector<long> v(static_cast<std::size_t>(m), 0);
    std::function<void(int)> rec = [&](int c) {
      if (c == m) {
        lags.push_back(v);
        return;
      }
      for (long s = -radius; s <= radius; ++s) {
        v[c] = s;
        rec(c + 1);
      }
    };
    rec(0);
  }
  const auto sums = parallel ? kernels::autocorrelation_parallel(patch.grid, lags)
                             : kernels::autocorrelation_serial(patch.grid, lags);
  const double norm = static_cast<double>(patch.cells);
  for (std::size_t i = 0; i < lags.size(); ++i) {
    t.lags.emplace_back(lags[i].begin(), lags[i].end());
    t.eta.push_back(sums[i].sum / norm);
    t.pairs.push_back(sums[i].pairs);
    t.dropped.push_back(sums[i].dropped);
  }
  return t;
}

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

long floor_mod(long a, long n) {
  const long r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

DiffractionEstimate diffraction_estimate(const WeightedPatch& patch, long grid) {
  const int m = static_cast<int>(patch.grid.extent.size());
  if (grid < 1) throw Error(ErrorCode::InvalidArgument, "grid must be positive");
  std::size_t total = 1;
  for (int c = 0; c < m; ++c) total *= static_cast<std::size_t>(grid);
  if (total > (std::size_t{1} << 26)) throw Error(ErrorCode::DomainTooLarge, "diffraction grid too large");

  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  std::fill_n(reinterpret_cast<double*>(buf), 2 * total, 0.0);
  const auto& g = patch.grid;
  for (std::size_t i = 0; i < g.weights.size(); ++i) {
    if (!g.inside[i]) continue;
    std::size_t rest = i;
    std::size_t off = 0;
    std::size_t stride = 1;
    for (int c = 0; c < m; ++c) {
      const long coord = static_cast<long>(rest % static_cast<std::size_t>(g.extent[c]));
      rest /= static_cast<std::size_t>(g.extent[c]);
      off += static_cast<std::size_t>(floor_mod(coord + static_cast<long>(patch.lo[c]), grid)) * stride;
      stride *= static_cast<std::size_t>(grid);
    }
    buf[off][0] += g.weights[i].real();
    buf[off][1] += g.weights[i].imag();
  }
  // FFTW is row-major with the last axis fastest; our first axis is fastest.
  std::vector<int> dims(static_cast<std::size_t>(m), static_cast<int>(grid));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft(m, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  DiffractionEstimate d;
  d.dim = m;
  d.grid = grid;
  d.intensity.resize(total);
  const double norm = static_cast<double>(patch.cells);
  double sum = 0;
  for (std::size_t i = 0; i < total; ++i) {
    d.intensity[i] = (buf[i][0] * buf[i][0] + buf[i][1] * buf[i][1]) / norm;
    sum += d.intensity[i];
  }
  fftw_free(buf);
  d.mean = sum / static_cast<double>(total);
  const auto mx = std::max_element(d.intensity.begin(), d.intensity.end());
  d.max = *mx;
  d.min = *std::min_element(d.intensity.begin(), d.intensity.end());
  d.peak_index = static_cast<std::size_t>(mx - d.intensity.begin());
  std::size_t rest = d.peak_index;
  for (int c = 0; c < m; ++c) {
    d.peak_k.push_back(static_cast<double>(rest % static_cast<std::size_t>(grid)) / static_cast<double>(grid));
    rest /= static_cast<std::size_t>(grid);
  }
  d.peak_fraction = d.max / norm;
  for (std::size_t i = 0; i < total; ++i)
    if (i != d.peak_index) d.second_max = std::max(d.second_max, d.intensity[i]);
  return d;
}

std::complex<double> exponential_sum(const WeightedPatch& patch, const std::vector<double>& k) {
  const auto& g = patch.grid;
  const int m = static_cast<int>(g.extent.size());
  std::complex<double> s = 0;
  for (std::size_t i = 0; i < g.weights.size(); ++i) {
    if (!g.inside[i]) continue;
    std::size_t rest = i;
    double phase = 0;
    for (int c = 0; c < m; ++c) {
      const long coord = static_cast<long>(rest % static_cast<std::size_t>(g.extent[c]));
      rest /= static_cast<std::size_t>(g.extent[c]);
      phase += k[c] * static_cast<double>(coord + patch.lo[c]);
    }
    s += g.weights[i] * std::polar(1.0, 2.0 * std::numbers::pi * (phase - std::floor(phase)));
  }
  return s;
}

SpectralCoefficientReport spectral_coefficient_check(const SpinSystem& sys, const Character& chi, int digit, int level,
                                                     int radius, int patch_level) {
  SpectralCoefficientReport r;
  r.level = level;
  if (!is_chi_unitary(sys, chi).unitary) {
    r.skipped = true;
    r.notice = "character " + chi.str() + " is not chi-unitary; check skipped";
    return r;
  }
  const auto& g = sys.group();
  const int L = sys.digit_count();
  const auto& ds = sys.digits();
  if (level < 1) throw Error(ErrorCode::InvalidArgument, "level must be at least 1");
  const auto count = ds.checked_count(level);
  if (count > 1024) throw Error(ErrorCode::DomainTooLarge, "exact cross sums are limited to |D|^M <= 1024");

  // powers[d][i] = chi(spin of cell i in S^M(d)) as a power of zeta_N.
  std::vector<std::vector<int>> powers(static_cast<std::size_t>(L), std::vector<int>(count));
  for (int d = 0; d < L; ++d)
    for (std::size_t i = 0; i < count; ++i)
      powers[d][i] = g.power(chi, g.element_at(supertile_spin_at(sys, {0, d}, ds.index_string(i, level))));
  const std::size_t top = count / static_cast<std::size_t>(L);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      if (i / top == j / top) continue;
      CyclotomicSum s(g.exponent());
      for (int d = 0; d < L; ++d) s.add_power(powers[d][i] - powers[d][j]);
      ++r.cross_sums;
      if (!s.is_zero()) ++r.nonzero;
    }

  if (patch_level < 0) {
    patch_level = 0;
    std::size_t cells = 1;
    while (cells * static_cast<std::size_t>(L) <= (std::size_t{1} << 16)) {
      cells *= static_cast<std::size_t>(L);
      ++patch_level;
    }
  }
  r.patch_level = patch_level;
  const auto patch = make_weighted_patch(sys, {0, digit}, patch_level, chi, digit);
  r.max_eta = autocorrelation(patch, radius).max_off_origin();
  return r;
}

std::string autocorrelation_csv(const AutocorrelationTable& t) {
  std::ostringstream os;
  os << "j,re_eta,im_eta,pairs,dropped\n" << std::setprecision(12);
  for (std::size_t i = 0; i < t.lags.size(); ++i) {
    for (std::size_t c = 0; c < t.lags[i].size(); ++c) os << (c ? " " : "") << t.lags[i][c];
    os << ',' << t.eta[i].real() << ',' << t.eta[i].imag() << ',' << t.pairs[i] << ',' << t.dropped[i] << '\n';
  }
  return os.str();
}

std::string diffraction_csv(const DiffractionEstimate& d) {
  std::ostringstream os;
  os << "k,intensity\n" << std::setprecision(12);
  for (std::size_t i = 0; i < d.intensity.size(); ++i) {
    std::size_t rest = i;
    for (int c = 0; c < d.dim; ++c) {
      os << (c ? " " : "") << static_cast<double>(rest % static_cast<std::size_t>(d.grid)) / static_cast<double>(d.grid);
      rest /= static_cast<std::size_t>(d.grid);
    }
    os << ',' << d.intensity[i] << '\n';
  }
  return os.str();
}

}  // namespace spinsub
