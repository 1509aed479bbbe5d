#include "qdot/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qdot/numerics.hpp"

namespace qdot::partition {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Boundary terms must be below this fraction of the interior maximum.
constexpr double kWindowTol = 1e-12;

double log_zn(int n, double beta, double delta) {
    // Canonical partition of n same-spin electrons on an equally spaced
    // ladder, kept to its ground term: Z_n ~ e^{-beta delta n(n-1)/2}.
    return -beta * delta * 0.5 * static_cast<double>(n) *
           static_cast<double>(n - 1);
}
}  // namespace

double zs_high_t(const model::DotParams& p) {
    p.validate();
    if (p.jperp >= p.delta || p.jz >= p.delta)
        throw RegimeError("zs_high_t: singular prefactor at jz or jperp >= delta");
    const double beta = p.beta();
    const double x = p.delta / (p.delta - p.jperp);
    const double js = model::j_star(p);
    const double y = std::sqrt(beta * std::abs(js));
    double f;
    if (y == 0.0) {
        f = x;  // both F limits equal their first argument
    } else if (p.jz >= p.jperp) {
        f = numerics::f1(x, y);
    } else {
        f = numerics::f2(x, y);
    }
    const double pref = std::sqrt(p.delta / (p.delta - p.jz)) *
                        std::exp(beta * p.jperp * p.jperp /
                                 (4.0 * (p.delta - p.jperp)));
    return pref * f;
}

LadderEval zs_n(const model::DotParams& p, double n) {
    p.validate();
    if (p.jperp >= p.delta)
        throw DivergenceError("zs_n: ladder diverges for jperp >= delta");
    const double beta = p.beta();
    const double n0 = std::abs(n);
    const double A = beta * (p.delta - p.jperp);
    const double B = beta * p.jperp;

    const auto a_plus = [&](double m) { return -A * m * m + B * m; };
    const auto a_minus = [&](double m) { return -A * m * m - B * m; };

    // Scale by the ladder maximum so every summed term is <= 1.
    const double m_peak = std::max(n0, B / (2.0 * A));
    const double scale = a_plus(m_peak);

    // The two ladders are combined term-by-term: every summand is positive,
    // so there is no cancellation between them.
    const auto bracket = [&](double m) {
        const double e = 2.0 * B * m;
        if (e > 500.0) return std::exp(a_plus(m) - scale);
        return std::exp(a_minus(m) - scale) * std::expm1(e);
    };
    const auto bracket_deriv = [&](double m) {
        return beta * m * m * bracket(m) +
               beta * m * (std::exp(a_plus(m) - scale) +
                           std::exp(a_minus(m) - scale));
    };

    const double first = std::exp(a_plus(n0) - scale);
    const auto ls = numerics::sum_ladder_full(bracket, n0 + 1.0);
    const auto ld = numerics::sum_ladder_full(bracket_deriv, n0 + 1.0);
    const double ladder = first + ls.sum;
    const double ladder_deriv = beta * (n0 * n0 + n0) * first + ld.sum;

    const double pref = std::sqrt(beta * p.delta / kPi) *
                        std::exp(beta * (p.jz - p.jperp) * n * n + scale);
    LadderEval out;
    out.value = pref * ladder;
    out.derivative_jperp = pref * (-beta * n * n * ladder + ladder_deriv);
    out.terms_used = 1 + ls.terms + ld.terms;
    out.truncation_error = pref * ls.truncation_error;
    return out;
}

double zs_n_approx(const model::DotParams& p, double n) {
    p.validate();
    if (p.jperp >= p.delta)
        throw DivergenceError("zs_n_approx: requires jperp < delta");
    const double beta = p.beta();
    const double n0 = std::abs(n);
    const double dperp = p.delta - p.jperp;
    const double root = std::sqrt(beta * dperp);
    const double shift = p.jperp / (2.0 * dperp);
    const double erf_part =
        0.5 * std::sqrt(p.delta / dperp) *
        std::exp(beta * p.jperp * p.jperp / (4.0 * dperp)) *
        std::exp(beta * (p.jz - p.jperp) * n * n) *
        (std::erf(root * (n0 + shift)) + std::erf(root * (-n0 + shift)));
    const double gauss_part = std::sqrt(beta * p.delta / kPi) *
                              std::exp(-beta * (p.delta - p.jz) * n * n) *
                              std::cosh(beta * p.jperp * n0);
    return erf_part + gauss_part;
}

double zs_n_large_n(const model::DotParams& p, double n) {
    p.validate();
    const double beta = p.beta();
    const double n0 = std::abs(n);
    return std::sqrt(beta * p.delta / kPi) *
           std::exp(-beta * (p.delta - p.jz) * n * n + beta * p.jperp * n0);
}

LowTEnumeration enumerate_low_t(const model::DotParams& p, int n_cut) {
    p.validate();
    if (n_cut < 1) throw DomainError("enumerate_low_t: n_cut must be >= 1");
    const double beta = p.beta();
    const int center = static_cast<int>(std::llround(p.n0));
    const int n_lo = std::max(0, center - n_cut);
    const int n_hi = std::max(n_lo, center + n_cut);

    LowTEnumeration out;
    out.n_lo = n_lo;
    out.n_hi = n_hi;
    std::vector<double> n_max_logw(n_hi - n_lo + 1,
                                   -std::numeric_limits<double>::infinity());

    for (int n = n_lo; n <= n_hi; ++n) {
        for (int n_up = 0; n_up <= n; ++n_up) {
            const int n_dn = n - n_up;
            const double m = 0.5 * (n_up - n_dn);
            const double two_m_plus_1 = 2.0 * m + 1.0;
            if (two_m_plus_1 == 0.0) continue;  // Sgn(0) = 0
            const int sign = two_m_plus_1 > 0.0 ? +1 : -1;
            const double base =
                log_zn(n_up, beta, p.delta) + log_zn(n_dn, beta, p.delta) +
                beta * (-p.ec * (n - p.n0) * (n - p.n0) + p.mu * n +
                        p.jperp * m * (m + 1.0));
            // l runs in unit steps over -|m+1/2|+1/2 ... |m+1/2|-1/2.
            const double half_span = std::abs(m + 0.5) - 0.5;
            const int count = static_cast<int>(std::llround(2.0 * half_span)) + 1;
            if (count <= 0) continue;
            for (int k = 0; k < count; ++k) {
                const double l = -half_span + k;
                const double lw = base + beta * (p.jz - p.jperp) * l * l;
                out.terms.push_back({n_up, n_dn, m, l, lw, sign});
                n_max_logw[n - n_lo] = std::max(n_max_logw[n - n_lo], lw);
            }
        }
    }
    if (out.terms.empty()) throw WindowError("enumerate_low_t: empty window");

    double global_max = -std::numeric_limits<double>::infinity();
    for (double w : n_max_logw) global_max = std::max(global_max, w);
    const double cutoff = global_max + std::log(kWindowTol);
    const bool lo_bad = n_lo > 0 && n_max_logw.front() >= cutoff;
    const bool hi_bad = n_max_logw.back() >= cutoff;
    if (lo_bad || hi_bad) {
        std::ostringstream msg;
        msg << "enumerate_low_t: charge window [" << n_lo << ", " << n_hi
            << "] still carries significant boundary weight; increase n_cut";
        throw WindowError(msg.str());
    }

    out.log_scale = global_max;
    double s = 0.0;
    for (const auto& t : out.terms)
        s += t.sign * std::exp(t.log_weight - global_max);
    if (!(s > 0.0))
        throw Error("enumerate_low_t: non-positive partition sum");
    out.scaled_sum = s;
    return out;
}

double grand_partition_low_t(const model::DotParams& p, int n_cut) {
    const auto e = enumerate_low_t(p, n_cut);
    return std::exp(e.log_scale) * e.scaled_sum;
}

int auto_low_t_window(const model::DotParams& p, int max_cut) {
    for (int w = 1; w <= max_cut; ++w) {
        try {
            enumerate_low_t(p, w);
            return w;
        } catch (const WindowError&) {
            continue;
        }
    }
    throw WindowError("auto_low_t_window: no passing window up to max_cut");
}

}  // namespace qdot::partition
