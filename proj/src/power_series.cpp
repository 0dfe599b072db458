#include "ancs/power_series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ancs/errors.hpp"

namespace ancs {

namespace {

void require_same_order(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.order() != b.order()) {
    throw InvalidArgument("series order mismatch: " + std::to_string(a.order()) +
                          " vs " + std::to_string(b.order()));
  }
}

constexpr double kLeadingTol = 1e-14;

}  // namespace

TruncatedSeries::TruncatedSeries(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidArgument("series needs at least one coefficient");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw InvalidArgument("series coefficient is not finite");
  }
}

TruncatedSeries TruncatedSeries::zero(std::size_t order) {
  return TruncatedSeries(std::vector<double>(order + 1, 0.0));
}

TruncatedSeries TruncatedSeries::identity(std::size_t order) {
  std::vector<double> c(order + 1, 0.0);
  c[0] = 1.0;
  return TruncatedSeries(std::move(c));
}

TruncatedSeries TruncatedSeries::exponential(std::size_t order, double scale) {
  std::vector<double> c(order + 1);
  c[0] = 1.0;
  for (std::size_t n = 1; n <= order; ++n) c[n] = c[n - 1] * scale / static_cast<double>(n);
  return TruncatedSeries(std::move(c));
}

TruncatedSeries TruncatedSeries::scaled(double s) const {
  std::vector<double> c(coeffs_);
  double p = 1.0;
  for (double& ck : c) {
    ck *= p;
    p *= s;
  }
  return TruncatedSeries(std::move(c));
}

double TruncatedSeries::evaluate(double u) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + *it;
  return acc;
}

TruncatedSeries operator*(double s, const TruncatedSeries& a) {
  std::vector<double> c(a.coeffs().begin(), a.coeffs().end());
  for (double& ck : c) ck *= s;
  return TruncatedSeries(std::move(c));
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_order(a, b);
  std::vector<double> c(a.coeffs().begin(), a.coeffs().end());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += b[k];
  return TruncatedSeries(std::move(c));
}

namespace series {

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_order(a, b);
  const std::size_t s = a.order();
  std::vector<double> c(s + 1, 0.0);
  for (std::size_t i = 0; i <= s; ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; i + j <= s; ++j) c[i + j] += a[i] * b[j];
  }
  return TruncatedSeries(std::move(c));
}

TruncatedSeries div(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_order(a, b);
  if (b[0] == 0.0) throw DomainError("series division by a divisor with zero leading coefficient");
  const std::size_t s = a.order();
  std::vector<double> q(s + 1, 0.0);
  for (std::size_t k = 0; k <= s; ++k) {
    double acc = a[k];
    for (std::size_t j = 0; j < k; ++j) acc -= q[j] * b[k - j];
    q[k] = acc / b[0];
  }
  return TruncatedSeries(std::move(q));
}

// F' a = a' with a_0 = 1 gives k F_k = k a_k - sum_{j=1}^{k-1} j F_j a_{k-j}.
TruncatedSeries log(const TruncatedSeries& a) {
  if (std::abs(a[0] - 1.0) > kLeadingTol) throw DomainError("series log needs leading coefficient 1");
  const std::size_t s = a.order();
  std::vector<double> f(s + 1, 0.0);
  for (std::size_t k = 1; k <= s; ++k) {
    double acc = static_cast<double>(k) * a[k];
    for (std::size_t j = 1; j < k; ++j) acc -= static_cast<double>(j) * f[j] * a[k - j];
    f[k] = acc / static_cast<double>(k);
  }
  return TruncatedSeries(std::move(f));
}

// E' = a' E gives k E_k = sum_{j=1}^{k} j a_j E_{k-j}.
TruncatedSeries exp(const TruncatedSeries& a) {
  if (std::abs(a[0]) > kLeadingTol) throw DomainError("series exp needs zero constant term");
  const std::size_t s = a.order();
  std::vector<double> e(s + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t k = 1; k <= s; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * a[j] * e[k - j];
    e[k] = acc / static_cast<double>(k);
  }
  return TruncatedSeries(std::move(e));
}

TruncatedSeries pow(const TruncatedSeries& a, double t) { return exp(t * log(a)); }

double max_deviation(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_order(a, b);
  double worst = 0.0;
  for (std::size_t k = 0; k <= a.order(); ++k) {
    const double scale = std::max(std::abs(a[k]), std::abs(b[k]));
    const double diff = std::abs(a[k] - b[k]);
    worst = std::max(worst, scale > 1e-8 ? diff / scale : diff);
  }
  return worst;
}

bool approx_equal(const TruncatedSeries& a, const TruncatedSeries& b, double tol) {
  return a.order() == b.order() && max_deviation(a, b) <= tol;
}

}  // namespace series
}  // namespace ancs
