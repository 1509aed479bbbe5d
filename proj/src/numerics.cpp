#include "qdot/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace qdot::numerics {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// 15-point Kronrod nodes (positive half) and weights, 7-point Gauss weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo, hi, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment eval_gk15(const Fn& f, double lo, double hi, long& evals) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1v = f(c - dx);
        const double f2v = f(c + dx);
        resk += kWgk[j] * (f1v + f2v);
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1v + f2v);
    }
    evals += 15;
    const double value = resk * h;
    double err = std::abs((resk - resg) * h);
    if (!std::isfinite(value)) {
        throw DomainError("integrand returned a non-finite value");
    }
    return {lo, hi, value, err};
}

}  // namespace

IntegrationResult integrate_adaptive(const Fn& f, double a, double b,
                                     double rel_tol, double abs_tol,
                                     int max_segments) {
    if (!(a < b)) throw DomainError("integrate_adaptive: requires a < b");
    if (!(rel_tol > 0)) throw DomainError("integrate_adaptive: rel_tol must be > 0");

    // Map infinite endpoints onto a finite interval.
    Fn g;
    double lo, hi;
    const bool inf_a = std::isinf(a), inf_b = std::isinf(b);
    if (inf_a && inf_b) {
        // t = u/(1-u^2), u in (-1, 1)
        g = [&f](double u) {
            const double d = 1.0 - u * u;
            const double t = u / d;
            const double jac = (1.0 + u * u) / (d * d);
            return f(t) * jac;
        };
        lo = -1.0;
        hi = 1.0;
    } else if (inf_b) {
        // t = a + u/(1-u), u in (0, 1)
        g = [&f, a](double u) {
            const double d = 1.0 - u;
            const double t = a + u / d;
            return f(t) / (d * d);
        };
        lo = 0.0;
        hi = 1.0;
    } else if (inf_a) {
        // t = b - u/(1-u), u in (0, 1)
        g = [&f, b](double u) {
            const double d = 1.0 - u;
            const double t = b - u / d;
            return f(t) / (d * d);
        };
        lo = 0.0;
        hi = 1.0;
    } else {
        g = f;
        lo = a;
        hi = b;
    }

    long evals = 0;
    std::priority_queue<Segment> active;
    active.push(eval_gk15(g, lo, hi, evals));
    double dead_value = 0.0, dead_error = 0.0;
    double act_value = active.top().value, act_error = active.top().error;
    int n_segments = 1;
    const double min_width = 1e-13 * (hi - lo);

    while (true) {
        const double total = dead_value + act_value;
        const double err = dead_error + act_error;
        if (err <= std::max(rel_tol * std::abs(total), abs_tol)) {
            return {total, err, evals};
        }
        if (active.empty() || n_segments >= max_segments) {
            std::ostringstream msg;
            msg << "integrate_adaptive: no convergence after " << n_segments
                << " segments (error " << err << ", value " << total << ")";
            throw ConvergenceError(msg.str(), total, err);
        }
        Segment worst = active.top();
        active.pop();
        act_value -= worst.value;
        act_error -= worst.error;
        if (worst.hi - worst.lo < min_width) {
            dead_value += worst.value;
            dead_error += worst.error;
            continue;
        }
        const double mid = 0.5 * (worst.lo + worst.hi);
        for (Segment s : {eval_gk15(g, worst.lo, mid, evals),
                          eval_gk15(g, mid, worst.hi, evals)}) {
            act_value += s.value;
            act_error += s.error;
            active.push(s);
        }
        ++n_segments;
    }
}

LadderSum sum_ladder_full(const Fn& term, double start, double rel_tol,
                          long max_terms) {
    LadderSum out;
    int small_streak = 0;
    int grow_streak = 0;
    double prev_mag = kInf;
    double last_mag = 0.0;
    for (long k = 0; k < max_terms; ++k) {
        const double t = term(start + static_cast<double>(k));
        const double mag = std::abs(t);
        if (!std::isfinite(t) || mag > 1e280) {
            std::ostringstream msg;
            msg << "sum_ladder: diverging term at m = " << start + k
                << " (|term| = " << mag << ")";
            throw DivergenceError(msg.str());
        }
        out.sum += t;
        out.terms = k + 1;
        last_mag = mag;
        grow_streak = (mag >= prev_mag && mag > 0.0) ? grow_streak + 1 : 0;
        prev_mag = mag;
        if (grow_streak > 2000 && mag > std::abs(out.sum)) {
            std::ostringstream msg;
            msg << "sum_ladder: terms growing without decay near m = "
                << start + k;
            throw DivergenceError(msg.str());
        }
        small_streak = (mag <= rel_tol * std::abs(out.sum)) ? small_streak + 1 : 0;
        if (small_streak >= 3) {
            out.truncation_error = 3.0 * last_mag;
            return out;
        }
    }
    std::ostringstream msg;
    msg << "sum_ladder: no convergence within " << max_terms
        << " terms (start = " << start << ")";
    throw DivergenceError(msg.str());
}

double sum_ladder(const Fn& term, double start, double rel_tol,
                  long max_terms) {
    return sum_ladder_full(term, start, rel_tol, max_terms).sum;
}

double log_sinh(double x) {
    if (x <= 0.0) throw DomainError("log_sinh: requires x > 0");
    if (x < 19.0) return std::log(std::sinh(x));
    return x - 0.6931471805599453 + std::log1p(-std::exp(-2.0 * x));
}

double sinh_ratio(double x, double s) {
    const double as = std::abs(s);
    if (as < 1e-4) {
        return x * (1.0 + (x * x - 1.0) * s * s / 6.0);
    }
    return std::exp(log_sinh(x * as) - log_sinh(as));
}

double f1(double x, double y) {
    if (!(y > 0.0)) throw DomainError("f1: requires y > 0");
    if (!(x > 0.0)) throw DomainError("f1: requires x > 0");
    // Even integrand; Gaussian envelope peaks at t0 = (x-1) y / 2.
    const double t0 = std::max(0.0, 0.5 * (x - 1.0) * y);
    const double t_cut = t0 + 8.5;
    const Fn integrand = [x, y](double t) {
        const double s = y * t;
        if (std::abs(s) < 1e-4) {
            return x * (1.0 + (x * x - 1.0) * s * s / 6.0) * std::exp(-t * t);
        }
        return std::exp(log_sinh(x * s) - log_sinh(s) - t * t);
    };
    const auto r = integrate_adaptive(integrand, 0.0, t_cut, kSpecialRelTol);
    return 2.0 * r.value / std::sqrt(kPi);
}

double f2(double x, double y) {
    if (!(y > 0.0)) throw DomainError("f2: requires y > 0");
    if (!(x > 0.0)) throw DomainError("f2: requires x > 0");
    const double window = 0.5 * kPi / y;
    const double t_cut = std::min(window, 10.0);
    const Fn integrand = [x, y](double t) {
        const double s = y * t;
        if (std::abs(s) < 1e-4) {
            return x * (1.0 - (x * x - 1.0) * s * s / 6.0) * std::exp(-t * t);
        }
        return std::sin(x * s) / std::sin(s) * std::exp(-t * t);
    };
    const auto r = integrate_adaptive(integrand, 0.0, t_cut, kSpecialRelTol);
    return 2.0 * r.value / std::sqrt(kPi);
}

double g_aux(double x) {
    if (x < 0.0) throw DomainError("g_aux: requires x >= 0");
    return (1.0 + 2.0 * x) * std::exp(x) * std::erf(std::sqrt(x));
}

}  // namespace qdot::numerics
