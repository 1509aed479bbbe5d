#include "qdot/qfi.hpp"

#include <cmath>
#include <sstream>

#include "qdot/numerics.hpp"

namespace qdot::qfi {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTailFraction = 1e-10;

double apply_convention(double v, Convention conv) {
    return conv == Convention::Hermitian ? 0.5 * v : v;
}
}  // namespace

QfiResult qfi_from_curve(const std::function<double(double)>& imchi,
                         const model::DotParams& p, double omega_max,
                         Convention conv) {
    p.validate();
    if (!(omega_max > 0.0))
        throw DomainError("qfi_from_curve: omega_max must be > 0");
    const double beta = p.beta();
    const numerics::Fn integrand = [&](double w) {
        return std::tanh(0.5 * beta * w) * imchi(w);
    };
    const auto body = numerics::integrate_adaptive(integrand, 0.0, omega_max,
                                                   numerics::kPhysicsRelTol);
    // One extra octave bounds the discarded tail.
    const auto tail = numerics::integrate_adaptive(
        integrand, omega_max, 2.0 * omega_max, 1e-4, 1e-14 * std::abs(body.value) + 1e-300);
    if (std::abs(tail.value) > kTailFraction * std::abs(body.value) &&
        std::abs(tail.value) > 1e-300) {
        std::ostringstream msg;
        msg << "qfi_from_curve: tail beyond omega_max contributes "
            << std::abs(tail.value) << " of " << body.value
            << "; increase omega_max";
        throw Error(msg.str());
    }
    double value = 4.0 / kPi * body.value;
    if (value < 0.0) {
        if (value < -1e-10 * (std::abs(value) + 1.0))
            throw DomainError("qfi_from_curve: negative absorption integral");
        value = 0.0;
    }
    return {apply_convention(value, conv), Method::CurveIntegral,
            4.0 / kPi * body.abs_error_estimate};
}

QfiResult qfi_from_comb(const susceptibility::DeltaComb& comb,
                        const model::DotParams& p, Convention conv) {
    p.validate();
    const double beta = p.beta();
    const double pos_eps = susceptibility::kMergeEps * p.delta;
    double sum = 0.0;
    for (const auto& pk : comb.peaks) {
        if (pk.omega <= pos_eps) continue;
        if (pk.weight < 0.0)
            throw DomainError(
                "qfi_from_comb: negative weight at positive frequency "
                "(nonphysical comb)");
        sum += pk.weight * std::tanh(0.5 * beta * pk.omega);
    }
    return {apply_convention(4.0 / kPi * sum, conv), Method::CombSum, 0.0};
}

QfiResult qfi_low_t_closed(const model::DotParams& p, model::SpinMode mode,
                           model::Parity parity, Convention conv) {
    p.validate();
    if (p.jz < p.jperp)
        throw RegimeError("qfi_low_t_closed: requires easy axis (jz >= jperp)");
    const double s = model::ground_state_spin(p, mode, parity);
    const double arg =
        0.5 * p.beta() * (p.jz - p.jperp) * (2.0 * s - 1.0);
    const double value = 4.0 * s * std::tanh(arg);
    return {apply_convention(value, conv), Method::ClosedForm, 0.0};
}

double auto_omega_max(const std::function<double(double)>& imchi,
                      const model::DotParams& p, double omega_start) {
    if (!(omega_start > 0.0))
        throw DomainError("auto_omega_max: omega_start must be > 0");
    const double beta = p.beta();
    const numerics::Fn integrand = [&](double w) {
        return std::tanh(0.5 * beta * w) * imchi(w);
    };
    double w = omega_start;
    double acc = numerics::integrate_adaptive(integrand, 0.0, w,
                                              numerics::kPhysicsRelTol)
                     .value;
    for (int oct = 0; oct < 40; ++oct) {
        const double piece =
            numerics::integrate_adaptive(integrand, w, 2.0 * w, 1e-4,
                                         1e-14 * std::abs(acc) + 1e-300)
                .value;
        if (std::abs(piece) <= kTailFraction * std::abs(acc)) return 2.0 * w;
        acc += piece;
        w *= 2.0;
    }
    throw Error("auto_omega_max: integral tail does not close");
}

QfiResult qfi_ising(const model::DotParams& p, Convention conv) {
    p.validate();
    const auto f = [&p](double w) {
        return susceptibility::ising_im_chi(w, p);
    };
    const double start =
        std::max(3.0 * susceptibility::ising_peak_estimate(p), p.delta);
    const double wmax = auto_omega_max(f, p, start);
    return qfi_from_curve(f, p, wmax, conv);
}

QfiResult qfi_aniso(const model::DotParams& p, Convention conv) {
    p.validate();
    if (std::abs(p.jz - p.jperp) <= model::kIsoEps * p.delta)
        return {0.0, Method::CurveIntegral, 0.0};
    const susceptibility::AnisoChi ev(p);
    const auto f = [&ev](double w) { return ev(w); };
    const double scale =
        2.0 * std::abs(p.jz - p.jperp) *
        std::sqrt(p.temperature / (p.delta - p.jz));
    const double wmax = auto_omega_max(f, p, std::max(4.0 * scale, p.delta));
    return qfi_from_curve(f, p, wmax, conv);
}

}  // namespace qdot::qfi
