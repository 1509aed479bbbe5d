#pragma once

#include <vector>

#include "qdot/model.hpp"

namespace qdot::partition {

struct LadderEval {
    double value = 0.0;
    double derivative_jperp = 0.0;  // analytic d/dJ_perp
    long terms_used = 0;
    double truncation_error = 0.0;
};

/// High-temperature spin partition function: prefactor
/// sqrt(delta/(delta-jz)) e^{beta jperp^2/[4(delta-jperp)]} times
/// F1(delta/(delta-jperp), sqrt(beta J_*)) on the easy-axis side
/// (jz >= jperp) or F2(..., sqrt(beta |J_*|)) on the easy-plane side.
double zs_high_t(const model::DotParams& p);

/// Ladder function Z_S(n): sqrt(beta delta/pi) e^{beta(jz-jperp) n^2} times
/// [sum_{m=|n|} e^{-beta(delta-jperp)m^2 + beta jperp m}
///  - sum_{m=|n|+1} e^{-beta(delta-jperp)m^2 - beta jperp m}],
/// unit-step ladders from the possibly non-integer |n| and |n|+1.
/// The derivative is accumulated term-wise (exact), not by differencing.
LadderEval zs_n(const model::DotParams& p, double n);

/// erf-based closed approximation of Z_S(n), valid for
/// beta(delta-jperp)|n| << 1.
double zs_n_approx(const model::DotParams& p, double n);

/// Ladder first-term limit sqrt(beta delta/pi) e^{-beta(delta-jz)n^2 +
/// beta jperp |n|}, valid for beta(delta-jperp)|n| >> 1.
double zs_n_large_n(const model::DotParams& p, double n);

/// One (n_up, n_dn, l) term of the low-temperature grand partition sum.
struct LowTTerm {
    int n_up = 0;
    int n_dn = 0;
    double m = 0.0;          // (n_up - n_dn)/2
    double l = 0.0;          // ladder member, unit steps
    double log_weight = 0.0; // includes the e^{beta(jz-jperp) l^2} factor
    int sign = +1;           // Sgn(2m+1)
};

struct LowTEnumeration {
    std::vector<LowTTerm> terms;
    double log_scale = 0.0;   // max log_weight, subtracted before exponentiating
    double scaled_sum = 0.0;  // sum of sign * exp(log_weight - log_scale) = Z/e^{log_scale}
    int n_lo = 0, n_hi = 0;
};

/// Enumerates the low-T grand partition terms over the charge window
/// n in [round(n0) - n_cut, round(n0) + n_cut] (clipped at 0), with
/// Z_n ~ e^{-beta delta n(n-1)/2}. Throws WindowError when a movable window
/// boundary still carries >= 1e-12 of the interior maximum weight.
LowTEnumeration enumerate_low_t(const model::DotParams& p, int n_cut);

/// Grand partition value exp(log_scale) * scaled_sum. May over/underflow
/// double for extreme beta; the enumeration form stays finite.
double grand_partition_low_t(const model::DotParams& p, int n_cut);

/// Smallest n_cut (from 1) whose window passes the boundary-weight check.
int auto_low_t_window(const model::DotParams& p, int max_cut = 64);

}  // namespace qdot::partition
