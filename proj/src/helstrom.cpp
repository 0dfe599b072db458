#include "ancs/helstrom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ancs/errors.hpp"

namespace ancs {

double helstrom_pure(double overlap_sq, double xi0) {
  if (!(overlap_sq >= 0.0 && overlap_sq <= 1.0)) throw DomainError("overlap_sq must lie in [0, 1]");
  if (!(xi0 > 0.0 && xi0 < 1.0)) throw DomainError("xi0 must lie in (0, 1)");
  if (overlap_sq == 0.0) return 0.0;
  const double s = 4.0 * xi0 * (1.0 - xi0) * overlap_sq;
  // 1 - sqrt(1 - s) without cancellation for small s.
  return 0.5 * s / (1.0 + std::sqrt(1.0 - s));
}

HelstromRecord helstrom_of_nbar(const AnFamily& fam, double nbar, double xi0, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("eta must lie in (0, 1]");
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw DomainError("nbar must be finite and >= 0");
  HelstromRecord r;
  r.nbar = nbar;
  r.eta = eta;
  r.xi0 = xi0;
  const double m = eta * nbar;
  const double u = invert_nbar(fam, m);
  const double h0 = fam.h(0, u);
  r.overlap_sq = std::clamp(h0 * h0, 0.0, 1.0);
  r.p_h = helstrom_pure(r.overlap_sq, xi0);
  r.delta = fam.closed.delta ? fam.closed.delta(m) : r.overlap_sq - std::exp(-m);
  return r;
}

std::string sign_class_name(SignClass c) {
  switch (c) {
    case SignClass::all_zero: return "all_zero";
    case SignClass::all_nonpositive: return "all_nonpositive";
    case SignClass::all_nonnegative: return "all_nonnegative";
    case SignClass::mixed: return "mixed";
  }
  return "mixed";
}

namespace {

constexpr double kZeroTol = 1e-12;

struct Extrema {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double arg_lo = 0.0;
  double arg_hi = 0.0;
};

SignClass classify(const Extrema& e) {
  const bool neg = e.lo < -kZeroTol;
  const bool pos = e.hi > kZeroTol;
  if (neg && pos) return SignClass::mixed;
  if (neg) return SignClass::all_nonpositive;
  if (pos) return SignClass::all_nonnegative;
  return SignClass::all_zero;
}

Extrema scan(const AnFamily& fam, std::span<const double> grid, double eta) {
  Extrema e;
  for (double nbar : grid) {
    const double d = helstrom_of_nbar(fam, nbar, 0.5, eta).delta;
    if (d < e.lo) { e.lo = d; e.arg_lo = nbar; }
    if (d > e.hi) { e.hi = d; e.arg_hi = nbar; }
  }
  return e;
}

}  // namespace

SignSummary sign_summary(const AnFamily& fam, std::span<const double> nbar_grid, double eta) {
  SignSummary s;
  if (nbar_grid.empty()) return s;
  const Extrema e = scan(fam, nbar_grid, eta);
  s.cls = classify(e);
  s.min_delta = e.lo;
  s.max_delta = e.hi;
  s.argmin_nbar = e.arg_lo;
  s.argmax_nbar = e.arg_hi;
  if (eta < 1.0) {
    std::vector<double> eff(nbar_grid.begin(), nbar_grid.end());
    for (double& v : eff) v *= eta;
    s.eta_consistent = classify(scan(fam, eff, 1.0)) == s.cls;
  }
  return s;
}

std::vector<HbZero> find_hb_zeros(const AnFamily& fam, double nbar_lo, double nbar_hi) {
  if (fam.kind != FamilyKind::sg && fam.kind != FamilyKind::sgm) {
    throw InvalidArgument(fam.name + ": vacuum overlap has no zeros to find");
  }
  if (!(nbar_lo >= 0.0 && nbar_hi > nbar_lo)) throw InvalidArgument("need 0 <= nbar_lo < nbar_hi");
  const double u_lo = invert_nbar(fam, nbar_lo);
  const double u_hi = invert_nbar(fam, nbar_hi);
  auto h0 = [&](double u) { return fam.h(0, u); };

  // Scan the signed overlap in z = 2 sqrt(u), where zeros are about pi apart.
  std::vector<HbZero> zeros;
  const double z_lo = 2.0 * std::sqrt(u_lo);
  const double z_hi = 2.0 * std::sqrt(u_hi);
  const int steps = std::max(1, static_cast<int>(std::ceil((z_hi - z_lo) / 0.1)));
  double a = u_lo;
  double fa = h0(a);
  for (int i = 1; i <= steps; ++i) {
    const double z = z_lo + (z_hi - z_lo) * i / steps;
    const double b = i == steps ? u_hi : 0.25 * z * z;
    const double fb = h0(b);
    if (fa != 0.0 && fb != 0.0 && (fa < 0.0) != (fb < 0.0)) {
      double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = h0(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
        if (mean_photons(fam, hi) - mean_photons(fam, lo) < 1e-10 && hi - lo <= 1e-15 * hi) break;
      }
      const double u = std::abs(h0(lo)) <= std::abs(h0(hi)) ? lo : hi;
      zeros.push_back({mean_photons(fam, u), u, std::abs(h0(u))});
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

}  // namespace ancs
