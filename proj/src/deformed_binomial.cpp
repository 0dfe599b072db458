#include "ancs/deformed_binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ancs/errors.hpp"
#include "ancs/specfun.hpp"

namespace ancs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TruncatedSeries truncate(const TruncatedSeries& s, int order) {
  if (order < 0 || static_cast<std::size_t>(order) > s.order()) {
    throw InvalidArgument("requested order " + std::to_string(order) + " exceeds series order " +
                          std::to_string(s.order()));
  }
  return TruncatedSeries(std::vector<double>(s.coeffs().begin(), s.coeffs().begin() + order + 1));
}

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0, 1]");
}

const NonlinearData& require_nonlinear(const AnFamily& fam) {
  if (!fam.nonlinear) throw InvalidArgument(fam.name + " is not a nonlinear coherent-state family");
  return *fam.nonlinear;
}

// Partial sum of sum_k c_k k^p u^k with a convergence verdict from the tail.
struct SeriesSum {
  double value = 0.0;
  bool converged = false;
};

SeriesSum weighted_sum(const TruncatedSeries& f, double u, int power_kind) {
  SeriesSum s;
  double up = 1.0;
  double last = 0.0;
  for (std::size_t k = 1; k <= f.order(); ++k) {
    up *= u;
    const double dk = static_cast<double>(k);
    const double w = power_kind == 1 ? dk : dk * dk - dk;
    last = w * f[k] * up;
    s.value += last;
  }
  const double scale = std::max(std::abs(s.value), 1e-300);
  s.converged = std::abs(last) <= 1e-15 * scale;
  return s;
}

}  // namespace

DeformedSequence::DeformedSequence(std::vector<double> x, std::vector<double> log_xfact)
    : x_(std::move(x)), log_xfact_(std::move(log_xfact)) {}

DeformedSequence DeformedSequence::from_x(std::vector<double> x) {
  if (x.empty() || x[0] != 0.0) throw InvalidArgument("deformed sequence needs x_0 = 0");
  std::vector<double> lx(x.size(), 0.0);
  for (std::size_t n = 1; n < x.size(); ++n) {
    if (!(x[n] > 0.0) || !std::isfinite(x[n])) throw InvalidArgument("deformed sequence needs x_n > 0 for n >= 1");
    lx[n] = lx[n - 1] + std::log(x[n]);
  }
  return DeformedSequence(std::move(x), std::move(lx));
}

DeformedSequence DeformedSequence::from_log_xfact(const std::function<double(int)>& log_xfact, int n_max) {
  if (n_max < 0) throw InvalidArgument("deformed sequence needs n_max >= 0");
  std::vector<double> x(n_max + 1, 0.0);
  std::vector<double> lx(n_max + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    lx[n] = log_xfact(n);
    if (!std::isfinite(lx[n])) throw InvalidArgument("ln x_n! is not finite at n=" + std::to_string(n));
    x[n] = std::exp(lx[n] - lx[n - 1]);
  }
  return DeformedSequence(std::move(x), std::move(lx));
}

DeformedSequence DeformedSequence::from_norm_series(const TruncatedSeries& norm) {
  if (norm[0] != 1.0) throw InvalidArgument("generating series needs a_0 = 1");
  const std::size_t s = norm.order();
  std::vector<double> x(s + 1, 0.0);
  std::vector<double> lx(s + 1, 0.0);
  for (std::size_t n = 1; n <= s; ++n) {
    if (!(norm[n] > 0.0)) throw InvalidArgument("generating series needs a_n > 0");
    x[n] = norm[n - 1] / norm[n];
    lx[n] = -std::log(norm[n]);
  }
  return DeformedSequence(std::move(x), std::move(lx));
}

TruncatedSeries DeformedSequence::norm_series(int order) const {
  if (order < 0 || order > n_max()) throw InvalidArgument("norm_series order beyond the sequence");
  std::vector<double> c(order + 1);
  for (int n = 0; n <= order; ++n) c[n] = std::exp(-log_xfact_[n]);
  return TruncatedSeries(std::move(c));
}

double DeformedBinomialDist::total() const {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

double DeformedBinomialDist::mean() const {
  double s = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) s += static_cast<double>(k) * probs[k];
  return s;
}

double DeformedBinomialDist::variance() const {
  const double m = mean();
  double s = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double d = static_cast<double>(k) - m;
    s += d * d * probs[k];
  }
  return s;
}

std::vector<double> asym_polynomials(const DeformedSequence& seq, const TruncatedSeries& norm, double eta,
                                     int order) {
  require_eta(eta);
  if (order > seq.n_max()) throw InvalidArgument("polynomial order beyond the sequence");
  const TruncatedSeries n_s = truncate(norm, order);
  const TruncatedSeries gen = series::div(n_s, n_s.scaled(eta));
  std::vector<double> p(order + 1);
  for (int s = 0; s <= order; ++s) p[s] = std::exp(seq.log_xfact(s)) * gen[s];
  return p;
}

std::vector<double> sym_polynomials(const DeformedSequence& seq, const TruncatedSeries& norm, double eta,
                                    int order) {
  require_eta(eta);
  if (order > seq.n_max()) throw InvalidArgument("polynomial order beyond the sequence");
  const TruncatedSeries gen = series::pow(truncate(norm, order), eta);
  std::vector<double> q(order + 1);
  for (int n = 0; n <= order; ++n) q[n] = std::exp(seq.log_xfact(n)) * gen[n];
  return q;
}

double hypergeometric_p(double m, int k, double eta) {
  if (k < 0) throw InvalidArgument("hypergeometric_p needs k >= 0");
  if (!(m > 0.0)) throw InvalidArgument("hypergeometric_p needs m > 0");
  double term = 1.0;
  double sum = 1.0;
  for (int j = 0; j < k; ++j) {
    term *= (j - m) * (j - k) / ((1.0 - k - m + j) * (j + 1.0)) * eta;
    sum += term;
  }
  return sum;
}

DeformedBinomialDist asym_distribution(const DeformedSequence& seq, std::span<const double> polys, int n,
                                       double eta) {
  require_eta(eta);
  if (n < 0 || n > seq.n_max() || static_cast<int>(polys.size()) <= n) {
    throw InvalidArgument("asym_distribution needs polynomials and sequence through order n");
  }
  DeformedBinomialDist d;
  d.n = n;
  d.eta = eta;
  d.flavor = DeformFlavor::asymmetric;
  d.probs.resize(n + 1);
  d.string_probs.resize(n + 1);
  // y_n = x_n / n with y_0! = 1, so ln y_n! = ln x_n! - ln n!.
  auto log_yfact = [&](int j) { return seq.log_xfact(j) - specfun::log_factorial(j); };
  for (int k = 0; k <= n; ++k) {
    const double eta_k = std::pow(eta, k);
    const double pk = polys[n - k];
    d.probs[k] = std::exp(seq.log_xfact(n) - seq.log_xfact(n - k) - seq.log_xfact(k)) * eta_k * pk;
    d.string_probs[k] = std::exp(log_yfact(n) - log_yfact(n - k) - log_yfact(k)) * eta_k * pk;
  }
  return d;
}

DeformedBinomialDist sym_distribution(const DeformedSequence& seq, std::span<const double> q_eta,
                                      std::span<const double> q_one_minus_eta, int n, double eta) {
  require_eta(eta);
  if (n < 0 || n > seq.n_max() || static_cast<int>(q_eta.size()) <= n ||
      static_cast<int>(q_one_minus_eta.size()) <= n) {
    throw InvalidArgument("sym_distribution needs polynomials and sequence through order n");
  }
  DeformedBinomialDist d;
  d.n = n;
  d.eta = eta;
  d.flavor = DeformFlavor::symmetric;
  d.probs.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    d.probs[k] = std::exp(seq.log_xfact(n) - seq.log_xfact(n - k) - seq.log_xfact(k)) * q_eta[k] *
                 q_one_minus_eta[n - k];
  }
  return d;
}

CstReport cst_check(const TruncatedSeries& norm, int order, std::span<const double> eta_grid) {
  const TruncatedSeries n_s = truncate(norm, order);
  CstReport r;
  r.log_coeffs = series::log(n_s);
  const TruncatedSeries& f = r.log_coeffs;
  r.in_sigma_plus = order >= 1 && f[1] > 0.0;
  for (int k = 2; k <= order && r.in_sigma_plus; ++k) {
    if (f[k] < -1e-14) r.in_sigma_plus = false;
  }
  const bool positive = std::all_of(n_s.coeffs().begin() + 1, n_s.coeffs().end(), [](double c) { return c > 0.0; });
  if (!positive) {
    // Outside Sigma: no sequence x_n exists, the polynomials are undefined.
    r.in_sigma_plus = false;
    r.min_poly_value = kNaN;
    return r;
  }
  const DeformedSequence seq = DeformedSequence::from_norm_series(n_s);
  double lowest = std::numeric_limits<double>::infinity();
  for (double eta : eta_grid) {
    for (double p : asym_polynomials(seq, n_s, eta, order)) lowest = std::min(lowest, p);
  }
  r.min_poly_value = lowest;
  r.polys_nonnegative = lowest >= -1e-10;
  return r;
}

DeformedBernoulliResult deformed_bernoulli(const AnFamily& fam, double u, double eta, int n) {
  const NonlinearData& nl = require_nonlinear(fam);
  check_domain(fam, u);
  require_eta(eta);
  if (n < 0) throw InvalidArgument("deformed_bernoulli needs n >= 0");

  DeformedBernoulliResult r;
  const double eu = eta * u;
  r.rhs = eu == 0.0 ? (n == 0 ? 1.0 : 0.0)
                    : std::exp(n * std::log(eu) - nl.log_norm(eu) - nl.log_xfact(n));
  if (u == 0.0) {
    r.lhs = n == 0 ? 1.0 : 0.0;
    r.terms = 1;
    return r;
  }
  const double lu = std::log(u);
  const double ln_u = nl.log_norm(u);
  const double eta_n = std::pow(eta, n);
  for (int order = 64; order <= 8192; order *= 2) {
    const DeformedSequence seq = DeformedSequence::from_log_xfact(nl.log_xfact, order + n);
    const std::vector<double> p = asym_polynomials(seq, seq.norm_series(order), eta, order);
    double acc = 0.0;
    int run = 0;
    for (int s = 0; s <= order; ++s) {
      const int m = n + s;
      // (x_m!/(x_s! x_n!)) eta^n p_s(eta) * u^m / (N(u) x_m!)
      const double term = std::exp(m * lu - ln_u - seq.log_xfact(s) - seq.log_xfact(n)) * eta_n * p[s];
      acc += term;
      run = std::abs(term) <= 1e-16 * std::abs(acc) ? run + 1 : 0;
      if (run == 10) {
        r.lhs = acc;
        r.terms = s + 1;
        return r;
      }
    }
  }
  throw ConvergenceError(fam.name + ": deformed Bernoulli sum decays too slowly");
}

PropositionReport prop1_check(const AnFamily& fam, std::span<const double> u_grid, int order) {
  const NonlinearData& nl = require_nonlinear(fam);
  const DeformedSequence seq = DeformedSequence::from_log_xfact(nl.log_xfact, order);
  const TruncatedSeries f = series::log(seq.norm_series(order));
  PropositionReport rep;
  rep.min_mandel = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (double u : u_grid) {
    PropositionRow row;
    row.u = u;
    const MomentSet series_m = moments_series(fam, u);
    row.nbar = series_m.nbar;
    row.lhs = series_m.mandel_q * series_m.nbar;
    const SeriesSum rhs = weighted_sum(f, u, 2);
    row.rhs = rhs.value;
    row.series_converged = rhs.converged;
    row.mandel_q = moments(fam, u).mandel_q;
    const double scale = std::max(std::abs(row.rhs), 1e-4 * series_m.n2bar);
    if (row.series_converged && scale > 0.0) {
      rep.max_rel_deviation = std::max(rep.max_rel_deviation, std::abs(row.lhs - row.rhs) / scale);
    }
    rep.min_mandel = std::min(rep.min_mandel, row.mandel_q);
    ok = ok && row.series_converged;
    rep.rows.push_back(row);
  }
  rep.passed = ok && rep.max_rel_deviation <= 1e-10 && rep.min_mandel >= -1e-12;
  return rep;
}

PropositionReport prop2_check(const AnFamily& fam, std::span<const double> nbar_grid, int order) {
  const NonlinearData& nl = require_nonlinear(fam);
  const DeformedSequence seq = DeformedSequence::from_log_xfact(nl.log_xfact, order);
  const TruncatedSeries f = series::log(seq.norm_series(order));
  PropositionReport rep;
  rep.min_delta = std::numeric_limits<double>::infinity();
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (double nbar : nbar_grid) {
    PropositionRow row;
    row.nbar = nbar;
    row.u = invert_nbar(fam, nbar);
    row.lhs = nl.log_norm(row.u);
    // u (ln N)' = sum k a_k u^k; where the truncated series has not settled
    // the mean photon number (the same quantity) stands in.
    const SeriesSum d = weighted_sum(f, row.u, 1);
    row.series_converged = d.converged;
    row.rhs = d.converged ? d.value : nbar;
    if (d.converged) {
      rep.max_rel_deviation = std::max(rep.max_rel_deviation, std::abs(d.value - nbar) / std::max(nbar, 1e-300));
    }
    row.delta = std::exp(-row.lhs) - std::exp(-nbar);
    row.mandel_q = moments(fam, row.u).mandel_q;
    rep.min_delta = std::min(rep.min_delta, row.delta);
    rep.min_gap = std::min(rep.min_gap, row.rhs - row.lhs);
    rep.rows.push_back(row);
  }
  rep.passed = rep.min_delta >= -1e-12 && rep.min_gap >= -1e-12 && rep.max_rel_deviation <= 1e-8;
  return rep;
}

}  // namespace ancs
