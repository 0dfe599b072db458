#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ancs/an_core.hpp"

namespace ancs {

// Parameter names per kind: spin "n_j", perelomov / barut_girardello "kappa",
// hermite "a", abel "beta"; gs, sg and sgm take none.
struct FamilySpec {
  FamilyKind kind = FamilyKind::gs;
  std::map<std::string, double> params;
};

FamilyKind parse_family_kind(std::string_view name);
std::string_view family_kind_name(FamilyKind kind);

// Validates parameters and wires h_n, the batch distribution, and every
// closed form the family admits. Throws InvalidArgument on bad parameters.
AnFamily make_family(const FamilySpec& spec);

// Convenience: make_family({kind, {{name, value}}}).
AnFamily make_family(FamilyKind kind, std::map<std::string, double> params = {});

// Nonlinear coherent states from an arbitrary sequence: ln x_n! and ln N(u)
// with N(u) = sum u^n / x_n! convergent for u < radius_sq.
AnFamily make_nonlinear_family(std::string name, std::function<double(int)> log_xfact,
                               std::function<double(double)> log_norm, double radius_sq);

// Deformed exponential of the Susskind-Glogower construction,
// N(u) = (1/u) sum_n n J_n(2 sqrt u)^2, in closed form.
double sgm_norm(double u);

// Limiting behaviours of a family at the given parameters.
struct LimitCheck {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// spin: total-variation distance of the rescaled distribution (u = 1/n_j) to
//       Poisson(1), tolerance 1e-2.
// perelomov: distribution in the scaled mean Nbar = nbar/(2 kappa) against the
//       Bose-Einstein (geometric) law of the same mean, worst TV over a grid,
//       tolerance 1e-3.
// abel: max relative deviation |x_n - n|/n for n <= 10, tolerance 1e-4.
// Other kinds have no limit statement and return an empty list.
std::vector<LimitCheck> limit_checks(const FamilySpec& spec);

}  // namespace ancs
