#pragma once

#include <cmath>
#include <functional>

#include "qdot/errors.hpp"

namespace qdot::numerics {

/// Default relative tolerances: tight for special functions, looser for
/// physics-level integrals so model error dominates quadrature error.
inline constexpr double kSpecialRelTol = 1e-9;
inline constexpr double kPhysicsRelTol = 1e-7;

struct IntegrationResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

using Fn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod 15(7) integration of f over (a, b).
/// Either endpoint may be +-infinity (handled by a rational variable change).
/// Throws ConvergenceError (carrying the partial value and its error
/// estimate) if the tolerance is not met within the subdivision budget.
IntegrationResult integrate_adaptive(const Fn& f, double a, double b,
                                     double rel_tol = kSpecialRelTol,
                                     double abs_tol = 0.0,
                                     int max_segments = 2000);

struct LadderSum {
    double sum = 0.0;
    long terms = 0;
    double truncation_error = 0.0;
};

/// Sum of term(start + k) for k = 0, 1, 2, ... in unit steps.
/// Stops once three consecutive terms fall below rel_tol of the running sum;
/// detects growing (divergent) ladders and throws DivergenceError.
LadderSum sum_ladder_full(const Fn& term, double start, double rel_tol = 1e-12,
                          long max_terms = 1000000);

double sum_ladder(const Fn& term, double start, double rel_tol = 1e-12,
                  long max_terms = 1000000);

inline double erf(double x) { return std::erf(x); }

/// log(sinh(x)) for x > 0, safe against overflow.
double log_sinh(double x);

/// sinh(x*s)/sinh(s) with the removable s = 0 singularity patched by its
/// quadratic series. Even in s; safe for large arguments.
double sinh_ratio(double x, double s);

/// F1(x, y) = integral dt/sqrt(pi) sinh(x y t)/sinh(y t) e^{-t^2} over the
/// whole line. Requires y > 0; F1(x, y->0) -> x.
double f1(double x, double y);

/// F2(x, y) = integral dt/sqrt(pi) sin(x y t)/sin(y t) e^{-t^2} over
/// (-pi/2y, pi/2y). Requires y > 0.
double f2(double x, double y);

/// g(x) = (1 + 2x) e^x erf(sqrt(x)), x >= 0.
double g_aux(double x);

}  // namespace qdot::numerics
