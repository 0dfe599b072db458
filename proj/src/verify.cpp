#include "ancs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "ancs/deformed_binomial.hpp"
#include "ancs/errors.hpp"
#include "ancs/families.hpp"
#include "ancs/helstrom.hpp"
#include "ancs/power_series.hpp"
#include "ancs/specfun.hpp"
#include "ancs/sweep.hpp"

namespace ancs {

namespace {

using Checks = std::vector<CheckResult>;

void add(Checks& out, std::string name, double deviation, double tolerance) {
  out.push_back({"", std::move(name), deviation, tolerance, std::isfinite(deviation) && deviation <= tolerance});
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> linspace(double lo, double hi, int n) { return make_grid(lo, hi, n, false); }

Checks power_series_checks() {
  Checks out;
  std::vector<double> c(31);
  for (int k = 0; k < 31; ++k) c[k] = 1.0 / (k + 1.0);
  const TruncatedSeries a(c);
  add(out, "exp(log a) == a", series::max_deviation(series::exp(series::log(a)), a), 1e-12);
  add(out, "(a*b)/b == a", series::max_deviation(series::div(series::mul(a, a.scaled(0.5)), a.scaled(0.5)), a), 1e-12);
  add(out, "pow(a, 2) == a*a", series::max_deviation(series::pow(a, 2.0), series::mul(a, a)), 1e-12);
  std::vector<double> u(31, 0.0);
  u[1] = 1.0;
  add(out, "exp(u) coefficients are 1/n!",
      series::max_deviation(series::exp(TruncatedSeries(u)), TruncatedSeries::exponential(30, 1.0)), 1e-14);
  return out;
}

Checks specfun_checks() {
  Checks out;
  double worst = 0.0;
  for (double x : {0.5, 1.0, 2.0, 5.0}) {
    const auto j = specfun::bessel_j_batch(80, 2.0 * x);
    double s = 0.0;
    for (int n = 1; n <= 80; ++n) s += n * n * j[n] * j[n];
    worst = std::max(worst, rel(s, x * x));
  }
  add(out, "sum n^2 J_n(2x)^2 = x^2, x in {0.5, 1, 2, 5}", worst, 1e-10);
  {
    const auto j = specfun::bessel_j_batch(200, 30.0);
    double s = j[0];
    for (int k = 1; 2 * k <= 200; ++k) s += 2.0 * j[2 * k];
    add(out, "J_0 + 2 sum J_2k = 1 at z=30", std::abs(s - 1.0), 1e-13);
  }
  add(out, "J_1(3.8317059702075125) vanishes", std::abs(specfun::bessel_j(1, 3.8317059702075125)), 1e-14);
  {
    const double w = specfun::lambert_w0(-0.2);
    add(out, "W(-0.2) e^W(-0.2) = -0.2", std::abs(w * std::exp(w) + 0.2), 1e-14);
  }
  add(out, "W(-1/e) = -1", std::abs(specfun::lambert_w0(-1.0 / std::numbers::e) + 1.0), 1e-7);
  add(out, "ln Gamma(1/2) = ln sqrt(pi)", std::abs(specfun::log_gamma(0.5) - 0.5 * std::log(std::numbers::pi)), 1e-14);
  add(out, "I_0(1) reference", rel(std::exp(specfun::log_bessel_i(0.0, 1.0)), 1.2660658777520082), 1e-14);
  {
    const auto r = specfun::integrate([](double x) { return std::exp(-x); }, 0.0, INFINITY);
    add(out, "integral of e^-x over [0, inf) = 1", std::abs(r.value - 1.0), 1e-10);
  }
  return out;
}

std::vector<AnFamily> sample_families() {
  return {make_family(FamilyKind::gs),
          make_family(FamilyKind::spin, {{"n_j", 4}}),
          make_family(FamilyKind::perelomov, {{"kappa", 2}}),
          make_family(FamilyKind::barut_girardello, {{"kappa", 2}}),
          make_family(FamilyKind::hermite, {{"a", 1}}),
          make_family(FamilyKind::abel, {{"beta", 2}}),
          make_family(FamilyKind::sg),
          make_family(FamilyKind::sgm)};
}

Checks an_core_checks() {
  Checks out;
  for (const AnFamily& fam : sample_families()) {
    double norm_dev = 0.0;
    double inv_dev = 0.0;
    for (double nbar : {0.3, 1.0, 2.5}) {
      const double u = invert_nbar(fam, nbar);
      norm_dev = std::max(norm_dev, std::abs(distribution(fam, u).total() - 1.0));
      inv_dev = std::max(inv_dev, std::abs(mean_photons(fam, u) - nbar));
    }
    add(out, fam.label() + ": probabilities sum to 1", norm_dev, 1e-12);
    add(out, fam.label() + ": nbar(u(nbar)) round trip", inv_dev, 1e-9);
  }
  {
    const AnFamily gs = make_family(FamilyKind::gs);
    const auto t = bernoulli_transform(distribution(gs, 3.0), 0.4);
    const auto p = distribution(gs, 1.2);
    double dev = 0.0;
    for (std::size_t n = 0; n < p.probs.size(); ++n) {
      dev = std::max(dev, std::abs((n < t.probs.size() ? t.probs[n] : 0.0) - p.probs[n]));
    }
    add(out, "Bernoulli transform of Poisson(3) at eta=0.4 is Poisson(1.2)", dev, 1e-12);
  }
  return out;
}

Checks families_checks() {
  Checks out;
  for (const AnFamily& fam : sample_families()) {
    double dev = 0.0;
    for (double nbar : {0.5, 2.0, 3.5}) {
      const double u = invert_nbar(fam, nbar);
      const MomentSet s = moments_series(fam, u);
      const MomentSet c = moments(fam, u);
      dev = std::max({dev, rel(c.nbar, s.nbar), std::abs(c.mandel_q - s.mandel_q)});
    }
    add(out, fam.label() + ": closed-form moments match series", dev, 1e-9);
  }
  {
    double dev = 0.0;
    for (double u : {1e-3, 0.5, 3.0, 20.0, 50.0}) {
      const auto j = specfun::bessel_j_batch(200, 2.0 * std::sqrt(u));
      double s = 0.0;
      for (int n = 1; n <= 200; ++n) s += n * j[n] * j[n];
      dev = std::max(dev, rel(sgm_norm(u), s / u));
    }
    add(out, "sgm N(u) closed form vs Bessel series", dev, 1e-9);
  }
  {
    // Large-u Mandel parameter with the (4 kappa - 1)/(8 sqrt u) correction.
    double dev = 0.0;
    for (double kappa : {0.5, 2.0, 5.0}) {
      const AnFamily fam = make_family(FamilyKind::barut_girardello, {{"kappa", kappa}});
      const double u = 1e4;
      dev = std::max(dev, std::abs(moments(fam, u).mandel_q - (-0.5 + (4.0 * kappa - 1.0) / (8.0 * std::sqrt(u)))));
    }
    add(out, "barut_girardello Q_M(u=1e4) asymptote", dev, 1e-3);
  }
  for (const FamilySpec& spec : {FamilySpec{FamilyKind::spin, {{"n_j", 1000}}},
                                 FamilySpec{FamilyKind::perelomov, {{"kappa", 0.5 + 1e-6}}},
                                 FamilySpec{FamilyKind::abel, {{"beta", 1e7}}}}) {
    for (const LimitCheck& c : limit_checks(spec)) add(out, c.name, c.deviation, c.tolerance);
  }
  return out;
}

Checks deformed_binomial_checks() {
  Checks out;
  const std::vector<AnFamily> cst = {make_family(FamilyKind::gs), make_family(FamilyKind::hermite, {{"a", 1}}),
                                     make_family(FamilyKind::abel, {{"beta", 2}}),
                                     make_family(FamilyKind::perelomov, {{"kappa", 1}})};
  for (const AnFamily& fam : cst) {
    const double r = std::isfinite(fam.radius_sq) ? 0.5 * fam.radius_sq : 2.0;
    const auto p1 = prop1_check(fam, linspace(0.01 * r, r, 20));
    add(out, fam.label() + ": Proposition 1 identity", p1.max_rel_deviation, 1e-10);
    add(out, fam.label() + ": Proposition 1 Q_M >= 0", std::max(0.0, -p1.min_mandel), 1e-12);
    const double nb = fam.kind == FamilyKind::abel ? 0.9 * nbar_supremum(fam) : 10.0;
    const auto p2 = prop2_check(fam, linspace(0.05, nb, 20));
    add(out, fam.label() + ": Proposition 2 Delta >= 0", std::max(0.0, -p2.min_delta), 1e-12);
    add(out, fam.label() + ": Proposition 2 ln N <= u (ln N)'", std::max(0.0, -p2.min_gap), 1e-12);
  }
  {
    const AnFamily fam = make_family(FamilyKind::perelomov, {{"kappa", 1}});
    double dev = 0.0;
    for (double eta : {0.2, 0.7}) {
      for (int n : {0, 1, 3, 6}) {
        const auto r = deformed_bernoulli(fam, 0.4, eta, n);
        dev = std::max(dev, rel(r.lhs, r.rhs));
      }
    }
    add(out, "deformed Bernoulli transform, perelomov kappa=1", dev, 1e-9);
  }
  {
    // N = (1 - u)^{-m}: asymmetric polynomials are terminating 2F1.
    const double m = 3.0;
    const int order = 20;
    std::vector<double> c(order + 1, 1.0);
    for (int k = 1; k <= order; ++k) c[k] = c[k - 1] * (m + k - 1) / k;
    const TruncatedSeries norm(c);
    const auto seq = DeformedSequence::from_norm_series(norm);
    double dev = 0.0;
    for (double eta : {0.25, 0.6}) {
      const auto p = asym_polynomials(seq, norm, eta, order);
      for (int k = 0; k <= order; ++k) dev = std::max(dev, std::abs(p[k] - hypergeometric_p(m, k, eta)));
    }
    add(out, "asymmetric polynomials of (1-u)^-3 equal 2F1", dev, 1e-10);
  }
  {
    const TruncatedSeries bad({1.0, 1.0, 0.0, 1.0 / 6.0});
    const double grid[] = {0.5};
    add(out, "1 + u + u^3/6 is outside Sigma_+", cst_check(bad, 3, grid).in_sigma_plus ? 1.0 : 0.0, 0.0);
  }
  return out;
}

Checks helstrom_checks() {
  Checks out;
  add(out, "P_H(0, 1/2) = 0", helstrom_pure(0.0, 0.5), 0.0);
  add(out, "P_H(1, 1/2) = 1/2", std::abs(helstrom_pure(1.0, 0.5) - 0.5), 1e-16);
  add(out, "P_H(1/4, 1/2)", std::abs(helstrom_pure(0.25, 0.5) - (1.0 - std::sqrt(3.0) / 2.0) / 2.0), 1e-15);
  {
    const auto r = helstrom_of_nbar(make_family(FamilyKind::spin, {{"n_j", 4}}), 2.0);
    add(out, "spin n_j=4 Delta(2) = 1/16 - e^-2", std::abs(r.delta - (0.0625 - std::exp(-2.0))), 1e-14);
  }
  {
    const AnFamily spin = make_family(FamilyKind::spin, {{"n_j", 10}});
    const auto s = sign_summary(spin, linspace(0.01, 9.99, 100));
    add(out, "spin n_j=10 Delta <= 0", std::max(0.0, s.max_delta), 1e-12);
    const AnFamily per = make_family(FamilyKind::perelomov, {{"kappa", 5}});
    const auto p = sign_summary(per, linspace(0.01, 10.0, 100), 0.6);
    add(out, "perelomov kappa=5 Delta >= 0", std::max(0.0, -p.min_delta), 1e-12);
    add(out, "perelomov kappa=5 sign class independent of eta", p.eta_consistent ? 0.0 : 1.0, 0.0);
  }
  for (FamilyKind k : {FamilyKind::sg, FamilyKind::sgm}) {
    const AnFamily fam = make_family(k);
    const auto z = find_hb_zeros(fam, 0.0, 6.0);
    const double first = z.empty() ? NAN : z.front().nbar;
    add(out, fam.label() + ": first vanishing bound near nbar = 2", std::abs(first - 2.0), 0.5);
    add(out, fam.label() + ": residual |h_0| at first zero", z.empty() ? NAN : z.front().residual, 1e-10);
  }
  return out;
}

Checks cli_checks() {
  Checks out;
  SweepRequest req;
  req.family = {FamilyKind::spin, {{"n_j", 4}}};
  req.quantity = Quantity::mandel_of_nbar;
  req.axis = Axis::nbar;
  req.lo = 0.0;
  req.hi = 4.0;
  req.count = 41;
  const SweepTable t = run_sweep(req, 1);
  double dev = 0.0;
  for (const auto& row : t.rows) dev = std::max(dev, std::abs(row[2] + row[0] / 4.0));
  add(out, "sweep spin n_j=4 mandel column equals -nbar/4", dev, 1e-10);

  req.family = {FamilyKind::sgm, {}};
  req.quantity = Quantity::pn_table;
  req.axis = Axis::u;
  req.hi = 20.0;
  const SweepTable p = run_sweep(req, 2);
  double worst = 0.0;
  for (const auto& row : p.rows) {
    double s = 0.0;
    for (std::size_t i = 2; i < row.size(); ++i) s += row[i];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  add(out, "sweep P_n rows sum to 1", worst, 1e-9);

  std::ostringstream a, b;
  write_csv(run_sweep(req, 1), a);
  write_csv(run_sweep(req, 3), b);
  add(out, "csv output independent of worker count", a.str() == b.str() ? 0.0 : 1.0, 0.0);
  return out;
}

struct Suite {
  const char* name;
  Checks (*run)();
};

constexpr Suite kSuites[] = {
    {"power_series", power_series_checks}, {"specfun", specfun_checks},
    {"an_core", an_core_checks},           {"families", families_checks},
    {"deformed_binomial", deformed_binomial_checks}, {"helstrom", helstrom_checks},
    {"cli", cli_checks},
};

}  // namespace

std::vector<std::string> verify_suites() {
  std::vector<std::string> names;
  for (const Suite& s : kSuites) names.emplace_back(s.name);
  return names;
}

std::vector<CheckResult> run_verify(std::string_view suite) {
  std::vector<CheckResult> all;
  bool found = false;
  for (const Suite& s : kSuites) {
    if (suite != "all" && suite != s.name) continue;
    found = true;
    for (CheckResult& c : s.run()) {
      c.suite = s.name;
      all.push_back(std::move(c));
    }
  }
  if (!found) throw InvalidArgument("unknown verify suite '" + std::string(suite) + "'");
  return all;
}

}  // namespace ancs
