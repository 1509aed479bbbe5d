#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qdot/numerics.hpp"
#include "qdot/qfi.hpp"

using namespace qdot;
using namespace qdot::qfi;
using model::DotParams;
using susceptibility::DeltaComb;

namespace {
constexpr double kPi = 3.14159265358979323846;

DotParams dot(double jz, double jperp, double T) {
    DotParams p;
    p.jz = jz;
    p.jperp = jperp;
    p.temperature = T;
    return p;
}
}  // namespace

TEST_CASE("qfi_from_curve: zero curve") {
    const auto r = qfi_from_curve([](double) { return 0.0; },
                                  dot(0.1, 0.0, 20.0), 10.0);
    CHECK(r.value == 0.0);
    CHECK(r.method == Method::CurveIntegral);
}

TEST_CASE("qfi_from_curve: small-beta kernel linearization") {
    const DotParams p = dot(0.1, 0.0, 1e4);
    const auto bump = [](double w) {
        return std::exp(-(w - 1.0) * (w - 1.0) * 8.0);
    };
    const double full = qfi_from_curve(bump, p, 6.0).value;
    const double lin =
        4.0 / kPi * 0.5 * p.beta() *
        numerics::integrate_adaptive(
            [&](double w) { return w * bump(w); }, 0.0, 6.0, 1e-10)
            .value;
    CHECK(full == doctest::Approx(lin).epsilon(0.01));
}

TEST_CASE("qfi_from_curve: unresolved tail is rejected") {
    const DotParams p = dot(0.3, 0.0, 20.0);
    const auto f = [&p](double w) {
        return susceptibility::ising_im_chi(w, p);
    };
    // cutoff far inside the peak: the next octave still carries weight
    CHECK_THROWS_AS(qfi_from_curve(f, p, 0.4 * susceptibility::ising_peak_estimate(p)),
                    Error);
}

TEST_CASE("qfi_from_comb: ground-state comb reproduces the closed form") {
    for (double jz : {0.7, 0.8, 0.9}) {
        for (double jperp : {0.3, 0.5}) {
            for (double T : {0.01, 0.05, 0.3}) {
                const DotParams p = dot(jz, jperp, T);
                const auto comb = susceptibility::low_t_ground_state_comb(
                    p, model::SpinMode::ContinuousFormula);
                if (comb.peaks.empty()) continue;
                const double s = model::ground_state_spin(
                    p, model::SpinMode::ContinuousFormula);
                const double expected =
                    4.0 * s *
                    std::tanh((jz - jperp) * (2.0 * s - 1.0) / (2.0 * T));
                CHECK(qfi_from_comb(comb, p).value ==
                      doctest::Approx(expected).epsilon(1e-12));
                CHECK(qfi_from_comb(comb, p).value ==
                      doctest::Approx(
                          qfi_low_t_closed(p, model::SpinMode::ContinuousFormula)
                              .value)
                          .epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("qfi_from_comb: empty and zero-frequency combs") {
    const DotParams p = dot(0.5, 0.5, 1.0);
    CHECK(qfi_from_comb(susceptibility::isotropic_comb(p, 0.0, 0.0), p).value ==
          0.0);
    // peak at omega = 0 carries no QFI
    CHECK(qfi_from_comb(susceptibility::isotropic_comb(p, 1.0, 0.0), p).value ==
          0.0);
}

TEST_CASE("qfi_from_comb: nonphysical comb is rejected") {
    DeltaComb comb;
    comb.params = dot(0.5, 0.2, 1.0);
    comb.peaks = {{0.5, -1.0}};
    CHECK_THROWS_AS(qfi_from_comb(comb, comb.params), DomainError);
}

TEST_CASE("qfi_from_curve converges to qfi_from_comb for a narrow peak") {
    const DotParams p = dot(0.8, 0.4, 0.5);
    const double w0 = 0.3, weight = kPi;
    DeltaComb comb;
    comb.params = p;
    comb.peaks = {{w0, weight}};
    const double exact = qfi_from_comb(comb, p).value;
    const double sigma = 1e-3;
    const auto gauss = [&](double w) {
        const double z = (w - w0) / sigma;
        return weight * std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
    };
    const double smooth = qfi_from_curve(gauss, p, 0.6).value;
    CHECK(smooth == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("qfi_low_t_closed: limits and zeros") {
    // T -> 0 saturates at 4S
    const DotParams p = dot(0.9, 0.5, 1e-4);
    const double s = model::ground_state_spin(p, model::SpinMode::ContinuousFormula);
    CHECK(qfi_low_t_closed(p, model::SpinMode::ContinuousFormula).value ==
          doctest::Approx(4.0 * s).epsilon(1e-9));
    // S = 1/2 (odd Ising) and S = 0 (even Ising) both give zero
    CHECK(qfi_low_t_closed(dot(0.5, 0.0, 0.01),
                           model::SpinMode::ContinuousFormula,
                           model::Parity::Odd)
              .value == 0.0);
    CHECK(qfi_low_t_closed(dot(0.5, 0.0, 0.01),
                           model::SpinMode::ContinuousFormula,
                           model::Parity::Even)
              .value == 0.0);
    // isotropic point
    CHECK(qfi_low_t_closed(dot(0.9, 0.9, 0.01),
                           model::SpinMode::ContinuousFormula)
              .value == 0.0);
    CHECK_THROWS_AS(
        qfi_low_t_closed(dot(0.4, 0.9, 0.01), model::SpinMode::ContinuousFormula),
        RegimeError);
}

TEST_CASE("qfi_ising: monotone in temperature and coupling") {
    double prev = -1.0;
    for (double T : {5.0, 10.0, 20.0, 40.0}) {
        const double v = qfi_ising(dot(0.1, 0.0, T)).value;
        CHECK(v > prev);
        prev = v;
    }
    prev = -1.0;
    for (double jz : {0.05, 0.1, 0.3, 0.5}) {
        const double v = qfi_ising(dot(jz, 0.0, 20.0)).value;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("qfi_ising: vanishes as jz -> 0") {
    const double v1 = qfi_ising(dot(0.01, 0.0, 20.0)).value;
    const double v2 = qfi_ising(dot(0.05, 0.0, 20.0)).value;
    CHECK(v1 < v2);
    CHECK(v1 < 5e-3);
}

TEST_CASE("qfi_aniso: trends and the isotropic zero") {
    // decreasing as jz approaches jperp = 0.98
    double prev = std::numeric_limits<double>::infinity();
    for (double jz : {0.2, 0.4, 0.6, 0.9}) {
        const double v = qfi_aniso(dot(jz, 0.98, 5.0)).value;
        CHECK(v < prev);
        CHECK(v > 0.0);
        prev = v;
    }
    // increasing as temperature decreases
    prev = -1.0;
    for (double T : {20.0, 10.0, 5.0, 2.5}) {
        const double v = qfi_aniso(dot(0.4, 0.98, T)).value;
        CHECK(v > prev);
        prev = v;
    }
    // exactly isotropic input
    CHECK(qfi_aniso(dot(0.5, 0.5, 5.0)).value == 0.0);
}

TEST_CASE("conventions: hermitian is exactly half of paper") {
    const DotParams p = dot(0.2, 0.0, 20.0);
    const double paper = qfi_ising(p, Convention::Paper).value;
    const double herm = qfi_ising(p, Convention::Hermitian).value;
    CHECK(herm == doctest::Approx(0.5 * paper).epsilon(1e-14));
    const DotParams q = dot(0.9, 0.5, 0.05);
    CHECK(qfi_low_t_closed(q, model::SpinMode::ContinuousFormula,
                           model::Parity::Even, Convention::Hermitian)
              .value ==
          doctest::Approx(0.5 * qfi_low_t_closed(
                                    q, model::SpinMode::ContinuousFormula)
                                    .value)
              .epsilon(1e-14));
}
