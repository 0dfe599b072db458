#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ancs/errors.hpp"
#include "ancs/families.hpp"
#include "ancs/power_series.hpp"
#include "ancs/specfun.hpp"

using namespace ancs;

TEST(Families, ParameterValidation) {
  EXPECT_THROW(make_family(FamilyKind::spin, {{"n_j", 2.5}}), InvalidArgument);
  EXPECT_THROW(make_family(FamilyKind::spin, {}), InvalidArgument);
  EXPECT_THROW(make_family(FamilyKind::perelomov, {{"kappa", 0.5}}), InvalidArgument);
  EXPECT_THROW(make_family(FamilyKind::barut_girardello, {{"kappa", 0.4}}), InvalidArgument);
  EXPECT_THROW(make_family(FamilyKind::hermite, {{"a", 0}}), InvalidArgument);
  EXPECT_THROW(make_family(FamilyKind::abel, {{"beta", -1}}), InvalidArgument);
  EXPECT_THROW(make_family(FamilyKind::gs, {{"x", 1}}), InvalidArgument);
  EXPECT_THROW(parse_family_kind("nope"), InvalidArgument);
  EXPECT_EQ(parse_family_kind("bg"), FamilyKind::barut_girardello);
  EXPECT_EQ(make_family(FamilyKind::spin, {{"n_j", 4}}).label(), "spin n_j=4");
}

TEST(Families, ClosedFormsMatchSeries) {
  const std::vector<AnFamily> fams = {
      make_family(FamilyKind::spin, {{"n_j", 10}}), make_family(FamilyKind::perelomov, {{"kappa", 5}}),
      make_family(FamilyKind::barut_girardello, {{"kappa", 2}}), make_family(FamilyKind::hermite, {{"a", 2}}),
      make_family(FamilyKind::abel, {{"beta", 10}}), make_family(FamilyKind::sgm)};
  for (const AnFamily& fam : fams) {
    for (double nbar : {0.05, 1.0, 3.0, 7.0}) {
      if (nbar >= nbar_supremum(fam)) continue;
      const double u = invert_nbar(fam, nbar);
      const MomentSet s = moments_series(fam, u);
      const MomentSet c = moments(fam, u);
      EXPECT_NEAR(c.nbar, s.nbar, 1e-10 * std::max(1.0, s.nbar)) << fam.label();
      EXPECT_NEAR(c.n2bar, s.n2bar, 1e-9 * std::max(1.0, s.n2bar)) << fam.label();
      EXPECT_NEAR(c.mandel_q, s.mandel_q, 1e-9) << fam.label();
      if (fam.closed.norm && fam.nonlinear) EXPECT_NEAR(std::log(fam.closed.norm(u)), fam.nonlinear->log_norm(u), 1e-12);
    }
  }
}

TEST(Families, HermiteExplicitSumAgainstSeriesExp) {
  for (double a : {0.5, 1.0, 2.0}) {
    std::vector<double> f(21, 0.0);
    f[1] = 1.0;
    f[2] = a / 2.0;
    const auto n = series::exp(TruncatedSeries(f));
    const auto fam = make_family(FamilyKind::hermite, {{"a", a}});
    for (int k = 0; k <= 20; ++k) {
      EXPECT_NEAR(std::exp(-fam.nonlinear->log_xfact(k)) / n[k], 1.0, 1e-12) << k;
    }
  }
}

TEST(Families, AbelSequenceFacts) {
  // x_n! = n! beta^{n-1} / (n+beta)^{n-1}; the sequence is bounded and tends
  // to beta/e but is not monotone for small beta.
  for (double beta : {2.0, 5.0, 100.0}) {
    const auto fam = make_family(FamilyKind::abel, {{"beta", beta}});
    const auto& lx = fam.nonlinear->log_xfact;
    double x_big = 0.0;
    for (int n = 1; n <= 4000; ++n) {
      const double x = std::exp(lx(n) - lx(n - 1));
      EXPECT_GT(x, 0.0);
      EXPECT_LE(x, n * std::exp(lx(1)) + 1e-12);
      x_big = x;
    }
    EXPECT_NEAR(x_big, beta / std::numbers::e, 2e-3 * beta);
  }
  const auto fam = make_family(FamilyKind::abel, {{"beta", 2}});
  EXPECT_NEAR(std::exp(fam.nonlinear->log_xfact(1)), 1.0, 1e-15);
  EXPECT_NEAR(std::exp(fam.nonlinear->log_xfact(2) - fam.nonlinear->log_xfact(1)), 1.0, 1e-14);
}

TEST(Families, SgmNormAgainstBesselSeries) {
  for (double u : {1e-8, 1e-3, 0.2, 1.0, 9.0, 40.0, 50.0}) {
    const auto j = specfun::bessel_j_batch(250, 2.0 * std::sqrt(u));
    double s = 0.0;
    for (int n = 1; n <= 250; ++n) s += n * j[n] * j[n];
    EXPECT_NEAR(sgm_norm(u), s / u, 1e-12) << u;
  }
  EXPECT_DOUBLE_EQ(sgm_norm(0.0), 1.0);
}

TEST(Families, SgHasNoFiniteSecondMomentTrouble) {
  const auto sg = make_family(FamilyKind::sg);
  // sum n^2 J_n(2x)^2 = x^2 gives P_n normalised.
  for (double u : {0.3, 5.0, 80.0}) EXPECT_NEAR(distribution(sg, u).total(), 1.0, 1e-12);
  EXPECT_NEAR(sg.h(0, 1e-9), 1.0, 1e-9);
}

TEST(Families, BarutGirardelloAsymptotics) {
  for (double kappa : {0.5, 2.0, 5.0}) {
    const auto fam = make_family(FamilyKind::barut_girardello, {{"kappa", kappa}});
    const double tk = 2.0 * kappa;
    const double u = 1e-4;
    const MomentSet s = moments_series(fam, u);
    EXPECT_NEAR(s.nbar / (u / tk * (1.0 - u / (tk * (1.0 + tk)))), 1.0, 1e-6);
    EXPECT_NEAR(s.n2bar / (u / tk * (1.0 - (1.0 - tk) * u / (tk * (1.0 + tk)))), 1.0, 1e-6);
    // Leading small-u Mandel term, relative error O(u).
    EXPECT_NEAR(s.mandel_q / (-u / (tk * (1.0 + tk))), 1.0, 1e-3);
    const double big = 1e4;
    const MomentSet b = moments(fam, big);
    EXPECT_NEAR(b.mandel_q, -0.5 + (4.0 * kappa - 1.0) / (8.0 * std::sqrt(big)), 1e-4);
    // Next term is O(1/sqrt(u)) with a kappa-dependent coefficient.
    EXPECT_NEAR(b.nbar, std::sqrt(big) - kappa + 0.25, 0.15);
    const double var = b.n2bar - b.nbar * b.nbar;
    EXPECT_NEAR(var / (std::sqrt(big) / 2.0), 1.0, 2e-2);
  }
}

TEST(Families, LimitChecks) {
  for (const auto& spec : {FamilySpec{FamilyKind::spin, {{"n_j", 1000}}},
                           FamilySpec{FamilyKind::perelomov, {{"kappa", 0.5 + 1e-7}}},
                           FamilySpec{FamilyKind::abel, {{"beta", 1e8}}}}) {
    const auto checks = limit_checks(spec);
    ASSERT_EQ(checks.size(), 1u);
    EXPECT_TRUE(checks[0].passed) << checks[0].name << " " << checks[0].deviation;
  }
  EXPECT_TRUE(limit_checks({FamilyKind::gs, {}}).empty());
}
