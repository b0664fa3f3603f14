#pragma once

#include <complex>
#include <vector>

#include "spinsub/fourier.hpp"

namespace spinsub::kernels {

/// (1/2N) log |B^(N)(x)|^2 at every grid point. The serial form is the
/// reference; the OpenMP form writes the same values slot by slot, so any
/// reduction over the output is bitwise reproducible.
std::vector<double> lyapunov_integrand_serial(const FourierBlock& block, int n, MatrixNorm norm,
                                              const QuadratureGrid& grid);
std::vector<double> lyapunov_integrand_parallel(const FourierBlock& block, int n, MatrixNorm norm,
                                                const QuadratureGrid& grid);

/// Dense weighted patch on a box; positions with zero weight are outside.
struct WeightGrid {
  std::vector<long> extent;  // per axis, first axis fastest
  std::vector<std::complex<double>> weights;
  std::vector<unsigned char> inside;
};

struct LagSums {
  std::complex<double> sum;
  std::size_t pairs = 0;     // both ends inside the patch
  std::size_t dropped = 0;   // start inside, end outside
};

/// sum over x of w(x+j) conj(w(x)) for every lag j (same layout as `lags`).
std::vector<LagSums> autocorrelation_serial(const WeightGrid& g, const std::vector<std::vector<long>>& lags);
std::vector<LagSums> autocorrelation_parallel(const WeightGrid& g, const std::vector<std::vector<long>>& lags);

double log_norm(const Eigen::MatrixXcd& m, MatrixNorm norm);

}  // namespace spinsub::kernels
