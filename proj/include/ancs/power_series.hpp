#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ancs {

// Truncated formal power series c_0 + c_1 u + ... + c_S u^S with double
// coefficients. The truncation order S is fixed by the caller; every binary
// operation requires matching orders.
class TruncatedSeries {
 public:
  TruncatedSeries() : coeffs_(1, 0.0) {}
  explicit TruncatedSeries(std::vector<double> coeffs);

  static TruncatedSeries zero(std::size_t order);
  static TruncatedSeries identity(std::size_t order);
  // Taylor coefficients of exp(scale * u): scale^n / n!.
  static TruncatedSeries exponential(std::size_t order, double scale = 1.0);

  std::size_t order() const { return coeffs_.size() - 1; }
  std::span<const double> coeffs() const { return coeffs_; }
  double operator[](std::size_t k) const { return coeffs_[k]; }

  // Substitution u -> s*u, i.e. c_n -> c_n s^n.
  TruncatedSeries scaled(double s) const;
  // Horner evaluation of the truncated polynomial.
  double evaluate(double u) const;

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  std::vector<double> coeffs_;
};

TruncatedSeries operator*(double s, const TruncatedSeries& a);
TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);

namespace series {

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);
// q with q*b = a through order S. Throws DomainError when b_0 == 0.
TruncatedSeries div(const TruncatedSeries& a, const TruncatedSeries& b);
// Requires a_0 == 1; result has zero constant term.
TruncatedSeries log(const TruncatedSeries& a);
// Requires a_0 == 0; result has unit constant term.
TruncatedSeries exp(const TruncatedSeries& a);
// exp(t * log(a)); requires a_0 == 1.
TruncatedSeries pow(const TruncatedSeries& a, double t);

// Coefficient-wise comparison: relative above 1e-8 magnitude, absolute below.
bool approx_equal(const TruncatedSeries& a, const TruncatedSeries& b, double tol);
double max_deviation(const TruncatedSeries& a, const TruncatedSeries& b);

}  // namespace series
}  // namespace ancs
