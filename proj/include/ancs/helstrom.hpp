#pragma once

#include <span>
#include <string>
#include <vector>

#include "ancs/an_core.hpp"

namespace ancs {

struct HelstromRecord {
  double nbar = 0.0;
  double eta = 1.0;
  double xi0 = 0.5;
  double overlap_sq = 1.0;  // h_0(u)^2 = |<alpha;h|0>|^2
  double p_h = 0.5;
  double delta = 0.0;       // overlap_sq - exp(-eta nbar)
};

// Pure-state bound for vacuum against |alpha;h> with prior xi0 on the vacuum.
double helstrom_pure(double overlap_sq, double xi0);

// Bound at mean photon number nbar seen through a detector of efficiency eta.
HelstromRecord helstrom_of_nbar(const AnFamily& fam, double nbar, double xi0 = 0.5, double eta = 1.0);

enum class SignClass { all_zero, all_nonpositive, all_nonnegative, mixed };

std::string sign_class_name(SignClass c);

struct SignSummary {
  SignClass cls = SignClass::all_zero;
  double min_delta = 0.0;
  double max_delta = 0.0;
  double argmin_nbar = 0.0;
  double argmax_nbar = 0.0;
  // Classification at eta equals the eta = 1 classification on the grid
  // of effective means eta * nbar.
  bool eta_consistent = true;
};

// Entries with |delta| <= 1e-12 count as zero.
SignSummary sign_summary(const AnFamily& fam, std::span<const double> nbar_grid, double eta = 1.0);

struct HbZero {
  double nbar = 0.0;
  double u = 0.0;
  double residual = 0.0;  // |h_0(u)|
};

// Zeros of h_0(u(nbar)) for nbar in (lo, hi). Only the Susskind-Glogower
// families oscillate; anything else throws InvalidArgument.
std::vector<HbZero> find_hb_zeros(const AnFamily& fam, double nbar_lo, double nbar_hi);

}  // namespace ancs
