#include "spinsub/kernels.hpp"

#include <cmath>
#include <limits>

namespace spinsub::kernels {

double log_norm(const Eigen::MatrixXcd& m, MatrixNorm norm) {
  if (norm == MatrixNorm::Frobenius) return std::log(m.norm());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return std::log(svd.singularValues()(0));
}

namespace {

double integrand(const FourierBlock& block, int n, MatrixNorm norm, const Eigen::VectorXd& k) {
  const auto p = cocycle_product(block, k, n);
  return (p.log_scale + log_norm(p.scaled, norm)) / static_cast<double>(n);
}

}  // namespace

std::vector<double> lyapunov_integrand_serial(const FourierBlock& block, int n, MatrixNorm norm,
                                              const QuadratureGrid& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = integrand(block, n, norm, grid.point(i));
  return out;
}

std::vector<double> lyapunov_integrand_parallel(const FourierBlock& block, int n, MatrixNorm norm,
                                                const QuadratureGrid& grid) {
  const auto total = static_cast<long long>(grid.size());
  std::vector<double> out(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < total; ++i) {
    out[static_cast<std::size_t>(i)] = integrand(block, n, norm, grid.point(static_cast<std::size_t>(i)));
  }
  return out;
}

namespace {

// Offset of x + lag, or -1 outside the box.
long long shifted(const WeightGrid& g, std::size_t index, const std::vector<long>& lag) {
  long long off = 0;
  long long stride = 1;
  for (std::size_t c = 0; c < g.extent.size(); ++c) {
    const long coord = static_cast<long>(index % static_cast<std::size_t>(g.extent[c]));
    index /= static_cast<std::size_t>(g.extent[c]);
    const long t = coord + lag[c];
    if (t < 0 || t >= g.extent[c]) return -1;
    off += t * stride;
    stride *= g.extent[c];
  }
  return off;
}

LagSums lag_sum(const WeightGrid& g, const std::vector<long>& lag) {
  LagSums s;
  for (std::size_t i = 0; i < g.weights.size(); ++i) {
    if (!g.inside[i]) continue;
    const auto j = shifted(g, i, lag);
    if (j < 0 || !g.inside[static_cast<std::size_t>(j)]) {
      ++s.dropped;
      continue;
    }
    ++s.pairs;
    s.sum += g.weights[static_cast<std::size_t>(j)] * std::conj(g.weights[i]);
  }
  return s;
}

}  // namespace

std::vector<LagSums> autocorrelation_serial(const WeightGrid& g, const std::vector<std::vector<long>>& lags) {
  std::vector<LagSums> out(lags.size());
  for (std::size_t l = 0; l < lags.size(); ++l) out[l] = lag_sum(g, lags[l]);
  return out;
}

std::vector<LagSums> autocorrelation_parallel(const WeightGrid& g, const std::vector<std::vector<long>>& lags) {
  std::vector<LagSums> out(lags.size());
  const auto n = static_cast<long long>(lags.size());
#pragma omp parallel for schedule(dynamic)
  for (long long l = 0; l < n; ++l) out[static_cast<std::size_t>(l)] = lag_sum(g, lags[static_cast<std::size_t>(l)]);
  return out;
}

}  // namespace spinsub::kernels
