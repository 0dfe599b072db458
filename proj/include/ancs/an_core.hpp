#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ancs {

enum class FamilyKind { gs, spin, perelomov, barut_girardello, hermite, abel, sg, sgm, custom };

// Closed-form evaluators a family may provide. Any member may be empty; the
// series path in an_core is always available and serves as the oracle.
struct ClosedForms {
  std::function<double(double)> norm;       // N(u)
  std::function<double(double)> nbar;       // nbar(u)
  std::function<double(double)> n2bar;      // mean of n^2 at u
  std::function<double(double)> mandel;     // Q_M(u)
  std::function<double(double)> u_of_nbar;  // inverse of nbar(u)
  std::function<double(double)> delta;      // Delta(nbar) against Glauber-Sudarshan
  std::function<double(double)> weight;     // w(u) of the resolution of identity
};

// Data carried by nonlinear coherent states h_n = (N(u) x_n!)^{-1/2}.
struct NonlinearData {
  std::function<double(int)> log_xfact;   // ln x_n!
  std::function<double(double)> log_norm;  // ln N(u)
};

// One member of the AN class: |alpha;h> = sum_n alpha^n h_n(|alpha|^2) |n>.
//
// Instances are immutable after construction and safe to share between
// threads. `probabilities` fills P_0..P_{count-1} at u in one batch so that
// families built on Bessel recurrences do not pay per-n setup cost.
struct AnFamily {
  FamilyKind kind = FamilyKind::custom;
  std::string name;
  std::map<std::string, double> params;
  double radius_sq = std::numeric_limits<double>::infinity();
  // Largest u accepted; below radius_sq for open bounded domains.
  double u_max = std::numeric_limits<double>::infinity();
  std::optional<int> support_max;
  std::function<double(int, double)> h;
  std::function<std::vector<double>(double, int)> probabilities;
  ClosedForms closed;
  std::optional<NonlinearData> nonlinear;

  // "spin n_j=4" style label used in output headers.
  std::string label() const;
};

struct PhotonDistribution {
  double u = 0.0;
  std::vector<double> probs;
  double tail_bound = 0.0;

  double total() const;
  double mean() const;
};

struct MomentSet {
  double nbar = 0.0;
  double n2bar = 0.0;
  double mandel_q = 0.0;
};

// P_n(u) = u^n h_n(u)^2, truncated once P_N < 1e-16 max P for ten
// consecutive n; the tail is bounded from the observed decay ratio.
PhotonDistribution distribution(const AnFamily& fam, double u);

// Moments from the truncated distribution only.
MomentSet moments_series(const AnFamily& fam, double u);
// Moments preferring the family's closed forms; falls back to the series.
MomentSet moments(const AnFamily& fam, double u);
// Mean photon number, closed form when available.
double mean_photons(const AnFamily& fam, double u);

// Moments of an arbitrary photon-count distribution.
MomentSet moments_of(const PhotonDistribution& dist);

// Largest nbar reachable on the accepted domain (n_j for spin, +inf otherwise).
double nbar_supremum(const AnFamily& fam);

// u with |nbar(u) - nbar| <= 1e-10 max(1, nbar).
double invert_nbar(const AnFamily& fam, double nbar);

// Photocount distribution at detector efficiency eta.
PhotonDistribution bernoulli_transform(const PhotonDistribution& dist, double eta);

// zeta = sqrt(nbar(|alpha|^2)) e^{i arg alpha}.
std::complex<double> phase_space_point(const AnFamily& fam, std::complex<double> alpha);

// Throws DomainError unless 0 <= u <= fam.u_max and u < radius_sq.
void check_domain(const AnFamily& fam, double u);

}  // namespace ancs
