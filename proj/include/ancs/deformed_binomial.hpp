#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ancs/an_core.hpp"
#include "ancs/power_series.hpp"

namespace ancs {

// Sequence 0 = x_0 < x_n (n >= 1) with cached ln x_n!. Positivity is
// enforced; monotonicity is not, CST sequences such as the Abel one rise and
// then settle back onto their limit.
class DeformedSequence {
 public:
  static DeformedSequence from_x(std::vector<double> x);
  static DeformedSequence from_log_xfact(const std::function<double(int)>& log_xfact, int n_max);
  // x_n = a_{n-1} / a_n from N(u) = sum a_n u^n with a_0 = 1, a_n > 0.
  static DeformedSequence from_norm_series(const TruncatedSeries& norm);

  int n_max() const { return static_cast<int>(x_.size()) - 1; }
  double x(int n) const { return x_.at(n); }
  double log_xfact(int n) const { return log_xfact_.at(n); }
  std::span<const double> xs() const { return x_; }

  // N(u) coefficients 1/x_n! through order S (S <= n_max).
  TruncatedSeries norm_series(int order) const;

 private:
  DeformedSequence(std::vector<double> x, std::vector<double> log_xfact);
  std::vector<double> x_;
  std::vector<double> log_xfact_;
};

enum class DeformFlavor { asymmetric, symmetric };

struct DeformedBinomialDist {
  int n = 0;
  double eta = 0.0;
  DeformFlavor flavor = DeformFlavor::asymmetric;
  std::vector<double> probs;        // p_k^(n)(eta), k = 0..n
  std::vector<double> string_probs;  // per-string pi_k^(n), asymmetric flavor only

  double total() const;
  double mean() const;
  double variance() const;
};

// p_0..p_S from N(u)/N(eta u) = sum_s p_s(eta) u^s / x_s!.
std::vector<double> asym_polynomials(const DeformedSequence& seq, const TruncatedSeries& norm, double eta,
                                     int order);
// q_0..q_S from N(u)^eta = sum_n q_n(eta) u^n / x_n!.
std::vector<double> sym_polynomials(const DeformedSequence& seq, const TruncatedSeries& norm, double eta,
                                    int order);

// Terminating 2F1(-m, -k; 1-k-m; eta): asymmetric polynomial of N = (1 - a u)^{-m}.
double hypergeometric_p(double m, int k, double eta);

DeformedBinomialDist asym_distribution(const DeformedSequence& seq, std::span<const double> polys, int n,
                                       double eta);
DeformedBinomialDist sym_distribution(const DeformedSequence& seq, std::span<const double> q_eta,
                                      std::span<const double> q_one_minus_eta, int n, double eta);

struct CstReport {
  bool in_sigma_plus = false;
  double min_poly_value = 0.0;
  bool polys_nonnegative = false;
  TruncatedSeries log_coeffs;  // F = ln N
};

// Sigma_+ membership from the signs of F = ln N, cross-checked by evaluating
// p_s(eta) on the grid.
CstReport cst_check(const TruncatedSeries& norm, int order, std::span<const double> eta_grid);

struct DeformedBernoulliResult {
  double lhs = 0.0;  // deformed Bernoulli sum
  double rhs = 0.0;  // (eta u)^n / (N(eta u) x_n!)
  int terms = 0;
};

// Requires a family with nonlinear data. Throws ConvergenceError when the sum
// does not settle.
DeformedBernoulliResult deformed_bernoulli(const AnFamily& fam, double u, double eta, int n);

struct PropositionRow {
  double u = 0.0;
  double nbar = 0.0;
  double lhs = 0.0;   // prop 1: n2bar - nbar^2 - nbar   | prop 2: ln N(u)
  double rhs = 0.0;   // prop 1: sum (k^2-k) a_k u^k    | prop 2: u d/du ln N(u)
  double mandel_q = 0.0;
  double delta = 0.0;
  bool series_converged = true;
};

struct PropositionReport {
  std::vector<PropositionRow> rows;
  double max_rel_deviation = 0.0;  // prop 1 identity mismatch
  double min_mandel = 0.0;
  double min_delta = 0.0;
  double min_gap = 0.0;            // prop 2: min of rhs - lhs
  bool passed = false;
};

// Super-Poissonian statement for N in Sigma_+: n2bar - nbar^2 - nbar equals
// sum_k (k^2 - k) a_k u^k and is nonnegative.
PropositionReport prop1_check(const AnFamily& fam, std::span<const double> u_grid, int order = 256);

// Helstrom statement for N in Sigma_+: ln N(u) < u (ln N)'(u), equivalently
// Delta(nbar) > 0.
PropositionReport prop2_check(const AnFamily& fam, std::span<const double> nbar_grid, int order = 256);

}  // namespace ancs
