#pragma once

#include <functional>
#include <vector>

namespace ancs::specfun {

/// J_0(z) .. J_{n_max}(z) for z >= 0.
///
/// Miller's downward recurrence J_{k-1} = (2k/z) J_k - J_{k+1}, started well
/// past the turning point k ~ z and normalized with J_0 + 2 sum_k J_{2k} = 1.
/// Arguments below 1e-4 use the ascending series directly.
std::vector<double> bessel_j_batch(int n_max, double z);

/// Single-order convenience wrapper around bessel_j_batch.
double bessel_j(int n, double z);

/// ln I_nu(z) from the ascending series, accumulated with rescaling so the
/// result stays finite far beyond the point where I_nu itself overflows.
/// Returns -inf for z == 0 and nu > 0.
double log_bessel_i(double nu, double z);

/// I_nu(z) for nu >= 0, z >= 0. Throws OverflowError past DBL_MAX.
double bessel_i(double nu, double z);

/// Principal branch W_0 on [-1/e, 0]. Throws DomainError outside.
double lambert_w0(double x);

/// Reentrant ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln C(n, k). Throws DomainError unless 0 <= k <= n.
double log_binomial(int n, int k);

/// ln n!
double log_factorial(int n);

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int evaluations = 0;
  bool converged = true;
};

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_subdivisions = 4000;
};

/// Globally adaptive Gauss-Kronrod (7/15) bisection on [a, b]. b may be
/// +infinity, in which case the integrand is mapped through u = a + t/(1-t).
/// Non-convergence is reported through `converged`, the value is the best
/// estimate available.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

}  // namespace ancs::specfun
