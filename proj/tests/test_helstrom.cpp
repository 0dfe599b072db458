#include <gtest/gtest.h>

#include <cmath>

#include "ancs/errors.hpp"
#include "ancs/families.hpp"
#include "ancs/helstrom.hpp"

using namespace ancs;

TEST(Helstrom, PureFormula) {
  EXPECT_EQ(helstrom_pure(0.0, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(helstrom_pure(1.0, 0.5), 0.5);
  EXPECT_NEAR(helstrom_pure(0.25, 0.5), (1.0 - std::sqrt(3.0) / 2.0) / 2.0, 1e-16);
  EXPECT_NEAR(helstrom_pure(1.0, 0.2), 0.2, 1e-16);
  double last = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double p = helstrom_pure(i / 100.0, 0.3);
    EXPECT_GT(p, last);
    last = p;
  }
  EXPECT_THROW(helstrom_pure(1.1, 0.5), DomainError);
  EXPECT_THROW(helstrom_pure(0.5, 0.0), DomainError);
}

TEST(Helstrom, GlauberAndExamples) {
  const auto gs = make_family(FamilyKind::gs);
  for (double nb : {0.3, 2.0, 7.0}) {
    const auto r = helstrom_of_nbar(gs, nb);
    EXPECT_NEAR(r.overlap_sq, std::exp(-nb), 1e-15);
    EXPECT_EQ(r.delta, 0.0);
  }
  EXPECT_NEAR(helstrom_of_nbar(make_family(FamilyKind::spin, {{"n_j", 4}}), 2.0).delta, 0.0625 - std::exp(-2.0), 1e-15);
  EXPECT_NEAR(helstrom_of_nbar(make_family(FamilyKind::perelomov, {{"kappa", 2}}), 4.0).delta,
              1.0 / 16.0 - std::exp(-4.0), 1e-15);
}

TEST(Helstrom, VacuumGivesOneHalf) {
  for (auto k : {FamilyKind::gs, FamilyKind::sg, FamilyKind::sgm}) {
    EXPECT_DOUBLE_EQ(helstrom_of_nbar(make_family(k), 0.0).p_h, 0.5);
  }
}

TEST(Helstrom, EtaRescaling) {
  const auto fam = make_family(FamilyKind::hermite, {{"a", 1}});
  const auto a = helstrom_of_nbar(fam, 4.0, 0.5, 0.5);
  const auto b = helstrom_of_nbar(fam, 2.0, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(a.overlap_sq, b.overlap_sq);
  EXPECT_DOUBLE_EQ(a.delta, b.delta);
  EXPECT_THROW(helstrom_of_nbar(fam, 1.0, 0.5, 0.0), DomainError);
}

TEST(Helstrom, DeltaAgreesWithOverlap) {
  for (const auto& fam : {make_family(FamilyKind::spin, {{"n_j", 4}}), make_family(FamilyKind::hermite, {{"a", 2}}),
                          make_family(FamilyKind::perelomov, {{"kappa", 5}})}) {
    for (double nb : {0.5, 1.5, 3.0}) {
      const auto r = helstrom_of_nbar(fam, nb);
      EXPECT_NEAR(r.delta, r.overlap_sq - std::exp(-nb), 1e-13) << fam.label();
    }
  }
}

TEST(SignSummary, Classes) {
  std::vector<double> g;
  for (int i = 1; i <= 60; ++i) g.push_back(9.9 * i / 60.0);
  EXPECT_EQ(sign_summary(make_family(FamilyKind::spin, {{"n_j", 10}}), g).cls, SignClass::all_nonpositive);
  EXPECT_EQ(sign_summary(make_family(FamilyKind::perelomov, {{"kappa", 5}}), g).cls, SignClass::all_nonnegative);
  EXPECT_EQ(sign_summary(make_family(FamilyKind::gs), g).cls, SignClass::all_zero);
  EXPECT_EQ(sign_summary(make_family(FamilyKind::barut_girardello, {{"kappa", 2}}), g).cls, SignClass::all_nonpositive);
  const auto s = sign_summary(make_family(FamilyKind::hermite, {{"a", 1}}), g, 0.4);
  EXPECT_EQ(s.cls, SignClass::all_nonnegative);
  EXPECT_TRUE(s.eta_consistent);
  EXPECT_EQ(sign_class_name(SignClass::mixed), "mixed");
}

TEST(SignSummary, PerelomovDeltaShrinksWithKappa) {
  double last = INFINITY;
  for (double k : {2.0, 5.0, 50.0, 500.0}) {
    const double d = helstrom_of_nbar(make_family(FamilyKind::perelomov, {{"kappa", k}}), 2.0).delta;
    EXPECT_GT(d, 0.0);
    EXPECT_LT(d, last);
    last = d;
  }
}

TEST(SignSummary, BarutGirardelloGrowsAsKappaFalls) {
  double last = 0.0;
  for (double k : {5.0, 2.0, 0.5}) {
    const double d = helstrom_of_nbar(make_family(FamilyKind::barut_girardello, {{"kappa", k}}), 2.0).delta;
    EXPECT_LT(d, 0.0);
    EXPECT_GT(std::abs(d), last);
    last = std::abs(d);
  }
}

TEST(Zeros, SusskindGlogower) {
  const double root = 3.8317059702075125;
  for (auto k : {FamilyKind::sg, FamilyKind::sgm}) {
    const auto fam = make_family(k);
    const auto z = find_hb_zeros(fam, 0.0, 6.0);
    ASSERT_EQ(z.size(), 2u) << fam.label();
    EXPECT_NEAR(z[0].u, root * root / 4.0, 1e-10);
    EXPECT_LT(z[0].residual, 1e-10);
    EXPECT_NEAR(z[0].nbar, 2.0, 0.5);
    EXPECT_EQ(find_hb_zeros(fam, 0.0, 4.0).size(), 1u);
    EXPECT_EQ(helstrom_of_nbar(fam, z[0].nbar).p_h < 1e-15, true);
  }
  EXPECT_THROW(find_hb_zeros(make_family(FamilyKind::gs), 0.0, 6.0), InvalidArgument);
}
