#include "ancs/an_core.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

#include "ancs/errors.hpp"
#include "ancs/specfun.hpp"

namespace ancs {

namespace {

constexpr double kTinyRatio = 1e-16;
constexpr int kTinyRun = 10;
constexpr int kMaxTerms = 1 << 22;

MomentSet from_raw(double nbar, double factorial2) {
  MomentSet m;
  m.nbar = nbar;
  m.n2bar = factorial2 + nbar;
  m.mandel_q = nbar > 0.0 ? (factorial2 - nbar * nbar) / nbar : 0.0;
  return m;
}

// Small-u stand-in for the 0/0 Mandel limit at the origin.
double origin_probe(const AnFamily& fam) { return 1e-8 * std::min(1.0, fam.u_max); }

}  // namespace

std::string AnFamily::label() const {
  std::ostringstream os;
  os << name;
  for (const auto& [k, v] : params) os << ' ' << k << '=' << v;
  return os.str();
}

double PhotonDistribution::total() const {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

double PhotonDistribution::mean() const {
  double s = 0.0;
  for (std::size_t n = 0; n < probs.size(); ++n) s += static_cast<double>(n) * probs[n];
  return s;
}

void check_domain(const AnFamily& fam, double u) {
  if (!(u >= 0.0) || !std::isfinite(u) || u > fam.u_max || u >= fam.radius_sq) {
    std::ostringstream os;
    os << fam.name << ": u=" << u << " outside [0, " << fam.u_max << "]";
    throw DomainError(os.str());
  }
}

PhotonDistribution distribution(const AnFamily& fam, double u) {
  check_domain(fam, u);
  PhotonDistribution d;
  d.u = u;
  if (fam.support_max) {
    const int count = *fam.support_max + 1;
    d.probs = fam.probabilities(u, count);
    d.tail_bound = count * 4.0 * DBL_EPSILON;
    return d;
  }

  int count = 64;
  while (count <= kMaxTerms) {
    std::vector<double> p = fam.probabilities(u, count);
    const auto peak_it = std::max_element(p.begin(), p.end());
    const double peak = *peak_it;
    const double cut = kTinyRatio * peak;
    int run = 0;
    int end = -1;
    for (int n = static_cast<int>(peak_it - p.begin()) + 1; n < count; ++n) {
      run = p[n] < cut ? run + 1 : 0;
      if (run == kTinyRun) {
        end = n + 1;
        break;
      }
    }
    if (end > 0) {
      p.resize(end);
      double ratio = 0.0;
      for (int n = end - kTinyRun; n < end; ++n) {
        if (p[n - 1] > 0.0) ratio = std::max(ratio, p[n] / p[n - 1]);
      }
      const double last = p.back();
      double tail = 0.0;
      if (last > 0.0) tail = ratio < 1.0 ? last * ratio / (1.0 - ratio) : kTinyRun * cut;
      d.probs = std::move(p);
      d.tail_bound = tail + static_cast<double>(end) * 4.0 * DBL_EPSILON;
      return d;
    }
    count *= 2;
  }
  throw ConvergenceError(fam.name + ": photon distribution did not decay within the term budget");
}

MomentSet moments_of(const PhotonDistribution& dist) {
  double m1 = 0.0;
  double f2 = 0.0;
  for (std::size_t n = 0; n < dist.probs.size(); ++n) {
    const double dn = static_cast<double>(n);
    m1 += dn * dist.probs[n];
    f2 += dn * (dn - 1.0) * dist.probs[n];
  }
  return from_raw(m1, f2);
}

MomentSet moments_series(const AnFamily& fam, double u) {
  check_domain(fam, u);
  if (u == 0.0) {
    MomentSet m;
    m.mandel_q = moments_of(distribution(fam, origin_probe(fam))).mandel_q;
    return m;
  }
  return moments_of(distribution(fam, u));
}

MomentSet moments(const AnFamily& fam, double u) {
  check_domain(fam, u);
  const ClosedForms& c = fam.closed;
  if (!c.nbar) return moments_series(fam, u);
  if (u == 0.0) {
    MomentSet m;
    m.mandel_q = c.mandel ? c.mandel(0.0) : moments_series(fam, 0.0).mandel_q;
    return m;
  }
  MomentSet m;
  m.nbar = c.nbar(u);
  if (c.mandel) {
    m.mandel_q = c.mandel(u);
    m.n2bar = c.n2bar ? c.n2bar(u) : m.nbar * m.nbar + m.nbar * (m.mandel_q + 1.0);
    return m;
  }
  if (c.n2bar) {
    m.n2bar = c.n2bar(u);
    const double excess = m.n2bar - m.nbar * m.nbar - m.nbar;
    // Q_M from closed n2bar loses all digits when the excess cancels.
    if (std::abs(excess) > 1e-4 * m.n2bar) {
      m.mandel_q = excess / m.nbar;
    } else {
      m.mandel_q = moments_series(fam, u).mandel_q;
    }
    return m;
  }
  const MomentSet s = moments_series(fam, u);
  m.n2bar = m.nbar * m.nbar + m.nbar * (s.mandel_q + 1.0);
  m.mandel_q = s.mandel_q;
  return m;
}

double mean_photons(const AnFamily& fam, double u) {
  check_domain(fam, u);
  if (u == 0.0) return 0.0;
  if (fam.closed.nbar) return fam.closed.nbar(u);
  return moments_of(distribution(fam, u)).nbar;
}

double nbar_supremum(const AnFamily& fam) {
  if (fam.support_max) return static_cast<double>(*fam.support_max);
  if (std::isfinite(fam.u_max)) return mean_photons(fam, fam.u_max);
  return std::numeric_limits<double>::infinity();
}

double invert_nbar(const AnFamily& fam, double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw DomainError(fam.name + ": nbar must be finite and >= 0");
  if (nbar == 0.0) return 0.0;
  if (nbar >= nbar_supremum(fam)) {
    std::ostringstream os;
    os << fam.label() << ": nbar=" << nbar << " beyond the reachable range";
    throw DomainError(os.str());
  }
  if (fam.closed.u_of_nbar) return std::min(fam.closed.u_of_nbar(nbar), fam.u_max);

  // Bracket: double from u=1 (capped at u_max) until nbar(hi) exceeds the target.
  double lo = 0.0;
  double hi = std::min(1.0, fam.u_max);
  while (mean_photons(fam, hi) < nbar) {
    if (hi >= fam.u_max) throw DomainError(fam.label() + ": nbar beyond the reachable range");
    lo = hi;
    hi = std::min(2.0 * hi, fam.u_max);
  }
  const double tol = 1e-12 * std::max(1.0, nbar);
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double val = mean_photons(fam, mid);
    if (std::abs(val - nbar) <= tol) break;
    (val < nbar ? lo : hi) = mid;
  }
  return mid;
}

PhotonDistribution bernoulli_transform(const PhotonDistribution& dist, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("bernoulli_transform needs eta in [0, 1]");
  PhotonDistribution out;
  out.u = dist.u;
  out.tail_bound = 2.0 * dist.tail_bound;
  if (eta == 1.0) {
    out.probs = dist.probs;
    return out;
  }
  const int size = static_cast<int>(dist.probs.size());
  out.probs.assign(size, 0.0);
  if (eta == 0.0) {
    out.probs[0] = dist.total();
    return out;
  }
  const double le = std::log(eta);
  const double l1e = std::log1p(-eta);
  for (int n = 0; n < size; ++n) {
    double acc = 0.0;
    for (int m = n; m < size; ++m) {
      if (dist.probs[m] == 0.0) continue;
      acc += std::exp(specfun::log_binomial(m, n) + n * le + (m - n) * l1e) * dist.probs[m];
    }
    out.probs[n] = acc;
  }
  return out;
}

std::complex<double> phase_space_point(const AnFamily& fam, std::complex<double> alpha) {
  const double u = std::norm(alpha);
  check_domain(fam, u);
  if (u == 0.0) return {0.0, 0.0};
  return std::polar(std::sqrt(mean_photons(fam, u)), std::arg(alpha));
}

}  // namespace ancs
