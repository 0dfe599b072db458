#include "ancs/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ancs/errors.hpp"
#include "ancs/specfun.hpp"

namespace ancs {

namespace {

using specfun::log_factorial;
using specfun::log_gamma;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOpenEdge = 1e-12;
constexpr double kSgmSeriesBelow = 1e-6;

double require_param(const FamilySpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    throw InvalidArgument(std::string(family_kind_name(spec.kind)) + " needs parameter '" + key + "'");
  }
  if (!std::isfinite(it->second)) throw InvalidArgument("parameter '" + key + "' must be finite");
  return it->second;
}

void reject_unknown(const FamilySpec& spec, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : spec.params) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw InvalidArgument(std::string(family_kind_name(spec.kind)) + " has no parameter '" + k + "'");
    }
  }
}

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Shared wiring for h_n = (N(u) x_n!)^{-1/2}: probabilities come straight from
// ln P_n = n ln u - ln x_n! - ln N(u), so no intermediate overflows.
AnFamily make_nonlinear(FamilyKind kind, std::map<std::string, double> params, NonlinearData nl) {
  AnFamily f;
  f.kind = kind;
  f.name = std::string(family_kind_name(kind));
  f.params = std::move(params);
  f.nonlinear = nl;
  f.h = [nl](int n, double u) { return std::exp(-0.5 * (nl.log_norm(u) + nl.log_xfact(n))); };
  f.probabilities = [nl](double u, int count) {
    std::vector<double> p(count, 0.0);
    if (u == 0.0) {
      p[0] = 1.0;
      return p;
    }
    const double lu = std::log(u);
    const double ln = nl.log_norm(u);
    for (int n = 0; n < count; ++n) {
      const double lx = nl.log_xfact(n);
      if (std::isinf(lx)) continue;
      p[n] = std::exp(n * lu - lx - ln);
    }
    return p;
  };
  return f;
}

AnFamily make_gs() {
  NonlinearData nl{[](int n) { return log_factorial(n); }, [](double u) { return u; }};
  AnFamily f = make_nonlinear(FamilyKind::gs, {}, nl);
  f.closed.norm = [](double u) { return std::exp(u); };
  f.closed.nbar = [](double u) { return u; };
  f.closed.n2bar = [](double u) { return u * u + u; };
  f.closed.mandel = [](double) { return 0.0; };
  f.closed.u_of_nbar = [](double nbar) { return nbar; };
  f.closed.delta = [](double) { return 0.0; };
  f.closed.weight = [](double) { return 1.0; };
  return f;
}

AnFamily make_spin(const FamilySpec& spec) {
  reject_unknown(spec, {"n_j"});
  const double nj_raw = require_param(spec, "n_j");
  if (nj_raw < 1.0 || nj_raw != std::floor(nj_raw) || nj_raw > 1e6) {
    throw InvalidArgument("spin needs a positive integer n_j");
  }
  const int nj = static_cast<int>(nj_raw);
  const double dnj = nj_raw;
  NonlinearData nl{[nj](int n) { return n > nj ? kInf : -specfun::log_binomial(nj, n); },
                   [dnj](double u) { return dnj * std::log1p(u); }};
  AnFamily f = make_nonlinear(FamilyKind::spin, {{"n_j", dnj}}, nl);
  f.support_max = nj;
  f.closed.norm = [dnj](double u) { return std::pow(1.0 + u, dnj); };
  f.closed.nbar = [dnj](double u) { return dnj * u / (1.0 + u); };
  f.closed.mandel = [](double u) { return -u / (1.0 + u); };
  f.closed.u_of_nbar = [dnj](double nbar) {
    const double p = nbar / dnj;
    return p / (1.0 - p);
  };
  f.closed.delta = [dnj](double nbar) { return std::pow(1.0 - nbar / dnj, dnj) - std::exp(-nbar); };
  f.closed.weight = [dnj](double u) { return (dnj + 1.0) / ((1.0 + u) * (1.0 + u)); };
  return f;
}

AnFamily make_perelomov(const FamilySpec& spec) {
  reject_unknown(spec, {"kappa"});
  const double kappa = require_param(spec, "kappa");
  if (!(kappa > 0.5)) throw InvalidArgument("perelomov needs kappa > 1/2");
  const double two_k = 2.0 * kappa;
  const double lg = log_gamma(two_k);
  NonlinearData nl{[two_k, lg](int n) { return log_factorial(n) + lg - log_gamma(two_k + n); },
                   [two_k](double u) { return -two_k * std::log1p(-u); }};
  AnFamily f = make_nonlinear(FamilyKind::perelomov, {{"kappa", kappa}}, nl);
  f.radius_sq = 1.0;
  f.u_max = 1.0 - kOpenEdge;
  f.closed.norm = [two_k](double u) { return std::pow(1.0 - u, -two_k); };
  f.closed.nbar = [two_k](double u) { return two_k * u / (1.0 - u); };
  f.closed.mandel = [](double u) { return u / (1.0 - u); };
  f.closed.u_of_nbar = [two_k](double nbar) {
    const double s = nbar / two_k;
    return s / (1.0 + s);
  };
  f.closed.delta = [two_k](double nbar) { return std::pow(1.0 + nbar / two_k, -two_k) - std::exp(-nbar); };
  f.closed.weight = [two_k](double u) { return (two_k - 1.0) / ((1.0 - u) * (1.0 - u)); };
  return f;
}

AnFamily make_barut_girardello(const FamilySpec& spec) {
  reject_unknown(spec, {"kappa"});
  const double kappa = require_param(spec, "kappa");
  if (!(kappa >= 0.5)) throw InvalidArgument("barut_girardello needs kappa >= 1/2");
  const double two_k = 2.0 * kappa;
  const double lg = log_gamma(two_k);
  auto log_norm = [two_k, kappa, lg](double u) {
    if (u == 0.0) return 0.0;
    return lg + (0.5 - kappa) * std::log(u) + specfun::log_bessel_i(two_k - 1.0, 2.0 * std::sqrt(u));
  };
  NonlinearData nl{[two_k, lg](int n) { return log_factorial(n) + log_gamma(two_k + n) - lg; }, log_norm};
  AnFamily f = make_nonlinear(FamilyKind::barut_girardello, {{"kappa", kappa}}, nl);
  // Ratios I_{nu+k}/I_nu through log differences stay finite for any u.
  auto ratio = [two_k](double u, double k) {
    const double z = 2.0 * std::sqrt(u);
    return std::exp(specfun::log_bessel_i(two_k - 1.0 + k, z) - specfun::log_bessel_i(two_k - 1.0, z));
  };
  f.closed.norm = [log_norm](double u) { return std::exp(log_norm(u)); };
  f.closed.nbar = [ratio](double u) { return u == 0.0 ? 0.0 : std::sqrt(u) * ratio(u, 1.0); };
  f.closed.n2bar = [ratio](double u) {
    return u == 0.0 ? 0.0 : std::sqrt(u) * ratio(u, 1.0) + u * ratio(u, 2.0);
  };
  f.closed.mandel = [two_k](double u) {
    if (u == 0.0) return 0.0;
    const double z = 2.0 * std::sqrt(u);
    const double l0 = specfun::log_bessel_i(two_k - 1.0, z);
    const double l1 = specfun::log_bessel_i(two_k, z);
    const double l2 = specfun::log_bessel_i(two_k + 1.0, z);
    return std::sqrt(u) * (std::exp(l2 - l1) - std::exp(l1 - l0));
  };
  return f;
}

// 1/x_n! = sum_{m <= n/2} (a/2)^m / (m! (n-2m)!), summed in log space.
double hermite_log_xfact(double a, int n) {
  std::vector<double> terms;
  terms.reserve(n / 2 + 1);
  const double la = std::log(0.5 * a);
  for (int m = 0; 2 * m <= n; ++m) terms.push_back(m * la - log_factorial(m) - log_factorial(n - 2 * m));
  return -log_sum_exp(terms);
}

AnFamily make_hermite(const FamilySpec& spec) {
  reject_unknown(spec, {"a"});
  const double a = require_param(spec, "a");
  if (!(a > 0.0)) throw InvalidArgument("hermite needs a > 0");
  NonlinearData nl{[a](int n) { return hermite_log_xfact(a, n); },
                   [a](double u) { return u + 0.5 * a * u * u; }};
  AnFamily f = make_nonlinear(FamilyKind::hermite, {{"a", a}}, nl);
  f.closed.norm = [a](double u) { return std::exp(u + 0.5 * a * u * u); };
  f.closed.nbar = [a](double u) { return u * (1.0 + a * u); };
  f.closed.mandel = [a](double u) { return a * u / (1.0 + a * u); };
  f.closed.u_of_nbar = [a](double nbar) { return (std::sqrt(1.0 + 4.0 * a * nbar) - 1.0) / (2.0 * a); };
  f.closed.delta = [a](double nbar) {
    const double s = std::sqrt(1.0 + 4.0 * a * nbar);
    return std::exp(0.25 / a - 0.5 * nbar - 0.25 * s / a) - std::exp(-nbar);
  };
  return f;
}

AnFamily make_abel(const FamilySpec& spec) {
  reject_unknown(spec, {"beta"});
  const double beta = require_param(spec, "beta");
  if (!(beta > 0.0)) throw InvalidArgument("abel needs beta > 0");
  auto w_of = [beta](double u) { return specfun::lambert_w0(-u / beta); };
  NonlinearData nl{[beta](int n) { return log_factorial(n) - (n - 1) * std::log1p(n / beta); },
                   [beta, w_of](double u) { return -beta * w_of(u); }};
  AnFamily f = make_nonlinear(FamilyKind::abel, {{"beta", beta}}, nl);
  f.radius_sq = beta / std::numbers::e;
  f.u_max = f.radius_sq - kOpenEdge;
  f.closed.norm = [beta, w_of](double u) { return std::exp(-beta * w_of(u)); };
  f.closed.nbar = [beta, w_of](double u) {
    const double w = w_of(u);
    return -beta * w / (1.0 + w);
  };
  f.closed.mandel = [w_of](double u) {
    const double w = w_of(u);
    return 1.0 / ((1.0 + w) * (1.0 + w)) - 1.0;
  };
  return f;
}

// J_{n+1}(2 sqrt u) / u^{(n+1)/2}, with the ascending series near the origin.
double sg_reduced(int n, double u) {
  if (u < 0.25) {
    // sum_m (-u)^m / (m! (n+m+1)!)
    double term = std::exp(-log_factorial(n + 1));
    double sum = term;
    for (int m = 1; m < 60; ++m) {
      term *= -u / (static_cast<double>(m) * (n + m + 1));
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  const double j = specfun::bessel_j(n + 1, 2.0 * std::sqrt(u));
  if (j == 0.0) return 0.0;
  return j * std::exp(-0.5 * (n + 1) * std::log(u));
}

AnFamily make_sg() {
  AnFamily f;
  f.kind = FamilyKind::sg;
  f.name = "sg";
  f.h = [](int n, double u) { return (n + 1) * sg_reduced(n, u); };
  f.probabilities = [](double u, int count) {
    std::vector<double> p(count, 0.0);
    if (u == 0.0) {
      p[0] = 1.0;
      return p;
    }
    const std::vector<double> j = specfun::bessel_j_batch(count, 2.0 * std::sqrt(u));
    for (int n = 0; n < count; ++n) p[n] = (n + 1.0) * (n + 1.0) * j[n + 1] * j[n + 1] / u;
    return p;
  };
  return f;
}

// Closed-form pieces of the SGm second moment: J0, J1 at 2 sqrt u.
struct BesselPair {
  double j0, j1;
};

BesselPair bessel_pair(double u) {
  const auto j = specfun::bessel_j_batch(1, 2.0 * std::sqrt(u));
  return {j[0], j[1]};
}

AnFamily make_sgm() {
  AnFamily f;
  f.kind = FamilyKind::sgm;
  f.name = "sgm";
  f.h = [](int n, double u) { return std::sqrt((n + 1.0) / sgm_norm(u)) * sg_reduced(n, u); };
  f.probabilities = [](double u, int count) {
    std::vector<double> p(count, 0.0);
    if (u == 0.0) {
      p[0] = 1.0;
      return p;
    }
    const std::vector<double> j = specfun::bessel_j_batch(count, 2.0 * std::sqrt(u));
    const double un = u * sgm_norm(u);
    for (int n = 0; n < count; ++n) p[n] = (n + 1.0) * j[n + 1] * j[n + 1] / un;
    return p;
  };
  f.closed.norm = sgm_norm;
  f.closed.weight = sgm_norm;
  f.closed.nbar = [](double u) { return 1.0 / sgm_norm(u) - 1.0; };
  f.closed.n2bar = [](double u) {
    if (u == 0.0) return 0.0;
    const auto [j0, j1] = bessel_pair(u);
    const double n = sgm_norm(u);
    const double su = std::sqrt(u);
    return -2.0 / n + 4.0 / 3.0 * (2.0 * u + 1.0) + (u * j0 * j0 - u * j1 * j1 + su * j0 * j1) / (3.0 * u * n);
  };
  return f;
}

}  // namespace

double sgm_norm(double u) {
  if (!(u >= 0.0)) throw DomainError("sgm_norm needs u >= 0");
  if (u < kSgmSeriesBelow) return 1.0 - 0.5 * u + u * u / 6.0;
  const auto [j0, j1] = bessel_pair(u);
  const double su = std::sqrt(u);
  return (2.0 * u * j0 * j0 - su * j0 * j1 + 2.0 * u * j1 * j1) / u;
}

FamilyKind parse_family_kind(std::string_view name) {
  if (name == "gs") return FamilyKind::gs;
  if (name == "spin") return FamilyKind::spin;
  if (name == "perelomov") return FamilyKind::perelomov;
  if (name == "barut_girardello" || name == "bg") return FamilyKind::barut_girardello;
  if (name == "hermite") return FamilyKind::hermite;
  if (name == "abel") return FamilyKind::abel;
  if (name == "sg") return FamilyKind::sg;
  if (name == "sgm") return FamilyKind::sgm;
  throw InvalidArgument("unknown family kind '" + std::string(name) + "'");
}

std::string_view family_kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::gs: return "gs";
    case FamilyKind::spin: return "spin";
    case FamilyKind::perelomov: return "perelomov";
    case FamilyKind::barut_girardello: return "barut_girardello";
    case FamilyKind::hermite: return "hermite";
    case FamilyKind::abel: return "abel";
    case FamilyKind::sg: return "sg";
    case FamilyKind::sgm: return "sgm";
    case FamilyKind::custom: return "custom";
  }
  return "custom";
}

AnFamily make_family(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::gs: reject_unknown(spec, {}); return make_gs();
    case FamilyKind::spin: return make_spin(spec);
    case FamilyKind::perelomov: return make_perelomov(spec);
    case FamilyKind::barut_girardello: return make_barut_girardello(spec);
    case FamilyKind::hermite: return make_hermite(spec);
    case FamilyKind::abel: return make_abel(spec);
    case FamilyKind::sg: reject_unknown(spec, {}); return make_sg();
    case FamilyKind::sgm: reject_unknown(spec, {}); return make_sgm();
    case FamilyKind::custom: break;
  }
  throw InvalidArgument("custom families are built with make_nonlinear_family");
}

AnFamily make_nonlinear_family(std::string name, std::function<double(int)> log_xfact,
                               std::function<double(double)> log_norm, double radius_sq) {
  if (!(radius_sq > 0.0)) throw InvalidArgument("nonlinear family needs a positive radius");
  AnFamily f = make_nonlinear(FamilyKind::custom, {}, NonlinearData{std::move(log_xfact), std::move(log_norm)});
  f.name = std::move(name);
  f.radius_sq = radius_sq;
  f.u_max = std::isfinite(radius_sq) ? radius_sq * (1.0 - kOpenEdge) : kInf;
  return f;
}

AnFamily make_family(FamilyKind kind, std::map<std::string, double> params) {
  return make_family(FamilySpec{kind, std::move(params)});
}

namespace {

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  const std::size_t n = std::max(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    s += std::abs(a - b);
  }
  return 0.5 * s;
}

std::vector<double> poisson_pmf(double mean, int count) {
  std::vector<double> p(count);
  for (int n = 0; n < count; ++n) p[n] = std::exp(n * std::log(mean) - mean - log_factorial(n));
  return p;
}

}  // namespace

std::vector<LimitCheck> limit_checks(const FamilySpec& spec) {
  std::vector<LimitCheck> out;
  const AnFamily fam = make_family(spec);
  switch (spec.kind) {
    case FamilyKind::spin: {
      // alpha -> alpha / sqrt(n_j) with |alpha| = 1.
      const double nj = fam.params.at("n_j");
      const auto d = distribution(fam, 1.0 / nj);
      const double tv = total_variation(d.probs, poisson_pmf(1.0, static_cast<int>(d.probs.size())));
      out.push_back({"spin contraction to Poisson(1), total variation", tv, 1e-2, tv < 1e-2});
      break;
    }
    case FamilyKind::perelomov: {
      double worst = 0.0;
      for (double nbig : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const auto d = distribution(fam, nbig / (1.0 + nbig));
        std::vector<double> geo(d.probs.size() + 200);
        for (std::size_t n = 0; n < geo.size(); ++n) {
          geo[n] = std::exp(n * std::log(nbig) - (n + 1.0) * std::log1p(nbig));
        }
        worst = std::max(worst, total_variation(d.probs, geo));
      }
      out.push_back({"perelomov scaled law vs Bose-Einstein, total variation", worst, 1e-3, worst < 1e-3});
      break;
    }
    case FamilyKind::abel: {
      double worst = 0.0;
      for (int n = 1; n <= 10; ++n) {
        const double xn = std::exp(fam.nonlinear->log_xfact(n) - fam.nonlinear->log_xfact(n - 1));
        worst = std::max(worst, std::abs(xn - n) / n);
      }
      out.push_back({"abel x_n -> n as beta grows, max relative deviation", worst, 1e-4, worst < 1e-4});
      break;
    }
    default:
      break;
  }
  return out;
}

}  // namespace ancs
