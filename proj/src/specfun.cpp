#include "ancs/specfun.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "ancs/errors.hpp"

namespace ancs::specfun {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> bessel_j_series(int n_max, double z) {
  std::vector<double> out(n_max + 1, 0.0);
  const double half = 0.5 * z;
  const double q = -half * half;
  for (int n = 0; n <= n_max; ++n) {
    const double lead_log = n * std::log(half) - log_factorial(n);
    if (lead_log < -745.0) break;
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < 40; ++m) {
      term *= q / (static_cast<double>(m) * (n + m));
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    out[n] = std::exp(lead_log) * sum;
  }
  return out;
}

}  // namespace

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial of negative integer");
  return log_gamma(static_cast<double>(n) + 1.0);
}

double log_binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) {
    throw DomainError("log_binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") out of range");
  }
  if (k == 0 || k == n) return 0.0;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

std::vector<double> bessel_j_batch(int n_max, double z) {
  if (n_max < 0) throw DomainError("bessel_j_batch needs n_max >= 0");
  if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("bessel_j_batch needs finite z >= 0");
  std::vector<double> out(n_max + 1, 0.0);
  if (z == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (z < 1e-4) return bessel_j_series(n_max, z);

  // The buffer past the turning point scales with the Airy width z^{1/3};
  // 8 z^{1/3} keeps J_M/Y_M below 1e-16 for every z.
  int m_start = n_max + static_cast<int>(std::ceil(z)) + 15 +
                static_cast<int>(std::ceil(8.0 * std::cbrt(z)));
  if (m_start % 2 != 0) ++m_start;

  double next = 0.0;  // J_{k+1}
  double cur = 1e-300;  // J_k, arbitrary seed
  double norm = 0.0;
  for (int k = m_start; k >= 1; --k) {
    if (k <= n_max) out[k] = cur;
    if (k % 2 == 0) norm += 2.0 * cur;
    const double prev = (2.0 * k / z) * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      const double s = 1e-250;
      cur *= s;
      next *= s;
      norm *= s;
      for (int i = std::min(k, n_max + 1); i <= n_max; ++i) out[i] *= s;
    }
  }
  out[0] = cur;
  norm += cur;
  for (double& v : out) v /= norm;
  return out;
}

double bessel_j(int n, double z) { return bessel_j_batch(n, z)[n]; }

double log_bessel_i(double nu, double z) {
  if (!(nu >= 0.0)) throw DomainError("bessel_i needs nu >= 0");
  if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("bessel_i needs finite z >= 0");
  if (z == 0.0) return nu == 0.0 ? 0.0 : -kInf;
  // I_nu(z) = (z/2)^nu / Gamma(nu+1) * sum_n t_n, t_0 = 1,
  // t_{n+1}/t_n = (z^2/4) / ((n+1)(nu+n+1)).
  const double q = 0.25 * z * z;
  double log_scale = 0.0;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < 100000; ++n) {
    term *= q / ((n + 1.0) * (nu + n + 1.0));
    sum += term;
    if (sum > 1e280) {
      sum *= 1e-280;
      term *= 1e-280;
      log_scale += 280.0 * std::numbers::ln10;
    }
    const bool past_peak = q < (n + 2.0) * (nu + n + 2.0);
    if (past_peak && term < 1e-17 * sum) break;
  }
  return nu * std::log(0.5 * z) - log_gamma(nu + 1.0) + log_scale + std::log(sum);
}

double bessel_i(double nu, double z) {
  const double l = log_bessel_i(nu, z);
  if (l > std::log(DBL_MAX)) throw OverflowError("bessel_i overflows double range");
  return std::exp(l);
}

double lambert_w0(double x) {
  constexpr double kBranch = -1.0 / std::numbers::e;
  if (!(x >= kBranch - 1e-16) || x > 0.0) throw DomainError("lambert_w0 needs x in [-1/e, 0]");
  if (x == 0.0) return 0.0;
  if (x <= kBranch) return -1.0;
  double w = x;
  // Near the branch point w = x is a poor start; use the square-root expansion.
  if (x < -0.3) {
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 4.0 * DBL_EPSILON * std::max(1.0, std::abs(w))) break;
  }
  return std::clamp(w, -1.0, 0.0);
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    kron += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  if (!std::isfinite(a)) throw DomainError("integrate needs a finite lower limit");
  if (!(b > a)) throw DomainError("integrate needs b > a");

  std::function<double(double)> g = f;
  double lo = a;
  double hi = b;
  if (std::isinf(b)) {
    g = [&f, a](double t) {
      const double one_minus = 1.0 - t;
      return f(a + t / one_minus) / (one_minus * one_minus);
    };
    lo = 0.0;
    hi = 1.0;
  }

  QuadratureResult res;
  std::priority_queue<Segment> heap;
  Segment first = gk15(g, lo, hi);
  res.evaluations = 15;
  heap.push(first);
  double total = first.value;
  double err = first.error;
  int pieces = 1;
  while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (pieces >= opts.max_subdivisions) {
      res.converged = false;
      break;
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      res.converged = false;
      break;
    }
    Segment left = gk15(g, worst.a, mid);
    Segment right = gk15(g, mid, worst.b);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++pieces;
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = total;
  res.abs_error_estimate = err;
  return res;
}

}  // namespace ancs::specfun
