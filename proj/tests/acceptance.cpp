// Acceptance suite: runs every release criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit status = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qdot/ed_oracle.hpp"
#include "qdot/model.hpp"
#include "qdot/numerics.hpp"
#include "qdot/qfi.hpp"
#include "qdot/susceptibility.hpp"

using namespace qdot;
using model::DotParams;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

DotParams dot(double jz, double jperp, double T, double ec = 0.0,
              double n0 = 0.0, double mu = 0.0) {
    DotParams p;
    p.jz = jz;
    p.jperp = jperp;
    p.temperature = T;
    p.ec = ec;
    p.n0 = n0;
    p.mu = mu;
    return p;
}

void criterion(int id, const std::string& name,
               const std::function<bool(std::ostringstream&)>& body) {
    std::ostringstream detail;
    bool pass = false;
    const auto t0 = Clock::now();
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail << " exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(Clock::now() - t0).count();
    if (!pass) ++g_failures;
    std::printf("C%02d %s %s (%.2fs)%s\n", id, pass ? "PASS" : "FAIL",
                name.c_str(), secs, detail.str().c_str());
}

susceptibility::CurveAnalysis analyze_ising(const DotParams& p, int points) {
    const auto c = susceptibility::sample_curve(
        [&p](double w) { return susceptibility::ising_im_chi(w, p); },
        susceptibility::default_omega_grid(p, points), p);
    return susceptibility::analyze_curve(c);
}

std::vector<std::pair<ed_oracle::EDModel, double>> acceptance_models() {
    std::mt19937 rng(20240814);
    std::uniform_real_distribution<double> tdist(0.2, 5.0);
    std::vector<std::pair<ed_oracle::EDModel, double>> out;
    for (int i = 0; i < 20; ++i) {
        const int levels = 2 + i % 3;
        out.emplace_back(ed_oracle::random_model(levels, rng), tdist(rng));
    }
    return out;
}

}  // namespace

int main() {
    criterion(1, "Ising peak law", [](std::ostringstream& d) {
        const auto t0 = Clock::now();
        const DotParams p = dot(0.1, 0.0, 20.0);
        const auto a = analyze_ising(p, 3000);
        const double est = susceptibility::ising_peak_estimate(p);
        bool ok = std::abs(a.peak_omega / est - 1.0) <= 0.02 &&
                  std::abs(est - 0.6667) < 1e-3;
        double worst = 0.0;
        for (double jz : {0.05, 0.1, 0.2, 0.3})
            for (double T : {10.0, 20.0, 35.0, 50.0}) {
                const DotParams q = dot(jz, 0.0, T);
                const auto aq = analyze_ising(q, 2000);
                worst = std::max(worst,
                                 std::abs(aq.peak_omega /
                                              susceptibility::ising_peak_estimate(q) -
                                          1.0));
            }
        ok = ok && worst <= 0.05;
        const double secs =
            std::chrono::duration<double>(Clock::now() - t0).count();
        ok = ok && secs < 1.0;
        d << " peak=" << a.peak_omega << " est=" << est << " grid_worst="
          << worst;
        return ok;
    });

    criterion(2, "FWHM law", [](std::ostringstream& d) {
        const auto t0 = Clock::now();
        const auto a = analyze_ising(dot(0.1, 0.0, 20.0), 3000);
        const double ratio = a.fwhm / a.peak_omega;
        d << " fwhm/peak=" << ratio;
        const double secs =
            std::chrono::duration<double>(Clock::now() - t0).count();
        return std::abs(ratio - 1.59) <= 0.05 && secs < 1.0;
    });

    criterion(3, "Static limit", [](std::ostringstream& d) {
        const double v = susceptibility::ising_static_chi(dot(0.1, 0.0, 20.0));
        const double expected = std::exp(1.1 / 80.0);
        d << " chi0=" << v;
        return std::abs(v - expected) <= 1e-12;
    });

    criterion(4, "Tanh-kernel sum-rule identity (20 random ED models)",
              [](std::ostringstream& d) {
                  const auto t0 = Clock::now();
                  double worst = 0.0;
                  for (const auto& [m, T] : acceptance_models()) {
                      const auto es = ed_oracle::build_and_diagonalize(m);
                      const auto xx =
                          ed_oracle::lehmann_comb(es, T, ed_oracle::Channel::XX);
                      double sum = 0.0;
                      for (const auto& pk : xx.peaks)
                          if (pk.omega > 1e-9)
                              sum += pk.weight * std::tanh(0.5 * pk.omega / T);
                      sum *= 4.0 / kPi;
                      const double fq = ed_oracle::thermal_qfi(es, T);
                      worst = std::max(worst, std::abs(fq - sum) /
                                                  std::max(std::abs(fq), 1e-30));
                  }
                  const double secs =
                      std::chrono::duration<double>(Clock::now() - t0).count();
                  d << " worst_rel=" << worst << " (budget 30s)";
                  return worst <= 1e-8 && secs < 30.0;
              });

    criterion(5, "PlusMinus = 2 x XX peak-by-peak", [](std::ostringstream& d) {
        double worst = 0.0;
        bool aligned = true;
        for (const auto& [m, T] : acceptance_models()) {
            const auto es = ed_oracle::build_and_diagonalize(m);
            const auto pm =
                ed_oracle::lehmann_comb(es, T, ed_oracle::Channel::PlusMinus);
            const auto xx =
                ed_oracle::lehmann_comb(es, T, ed_oracle::Channel::XX);
            if (pm.peaks.size() != xx.peaks.size()) {
                aligned = false;
                break;
            }
            double wmax = 1e-300;
            for (const auto& pk : pm.peaks)
                wmax = std::max(wmax, std::abs(pk.weight));
            for (std::size_t i = 0; i < pm.peaks.size(); ++i) {
                aligned = aligned &&
                          std::abs(pm.peaks[i].omega - xx.peaks[i].omega) <= 1e-9;
                worst = std::max(worst, std::abs(pm.peaks[i].weight -
                                                 2.0 * xx.peaks[i].weight) /
                                            wmax);
            }
        }
        d << " worst_rel=" << worst;
        return aligned && worst <= 1e-10;
    });

    criterion(6, "Low-T closed form vs comb sum", [](std::ostringstream& d) {
        double worst = 0.0;
        int points = 0;
        for (double jz : {0.8, 0.85, 0.9, 0.95})
            for (double jperp : {0.45, 0.55, 0.65, 0.75, 0.78})
                for (double T : {0.005, 0.02, 0.05, 0.1, 0.3}) {
                    const DotParams p = dot(jz, jperp, T);
                    const auto comb = susceptibility::low_t_ground_state_comb(
                        p, model::SpinMode::ContinuousFormula);
                    const double s = model::ground_state_spin(
                        p, model::SpinMode::ContinuousFormula);
                    if (comb.peaks.empty()) continue;
                    const double closed =
                        4.0 * s *
                        std::tanh((jz - jperp) * (2.0 * s - 1.0) / (2.0 * T));
                    const double sum = qfi::qfi_from_comb(comb, p).value;
                    worst = std::max(worst, std::abs(sum - closed) /
                                                std::abs(closed));
                    ++points;
                }
        const DotParams p0 = dot(0.9, 0.5, 1e-4);
        const double s0 =
            model::ground_state_spin(p0, model::SpinMode::ContinuousFormula);
        const double limit =
            qfi::qfi_low_t_closed(p0, model::SpinMode::ContinuousFormula).value;
        d << " grid_points=" << points << " worst_rel=" << worst
          << " T->0 residual=" << std::abs(limit - 4.0 * s0);
        return points >= 100 && worst <= 1e-12 &&
               std::abs(limit - 4.0 * s0) <= 1e-9;
    });

    criterion(7, "Degenerate zeros", [](std::ostringstream& d) {
        const double a = qfi::qfi_aniso(dot(0.6, 0.6, 5.0)).value;
        const double b_even =
            qfi::qfi_low_t_closed(dot(0.5, 0.0, 0.01),
                                  model::SpinMode::ContinuousFormula,
                                  model::Parity::Even)
                .value;
        const double b_odd =
            qfi::qfi_low_t_closed(dot(0.5, 0.0, 0.01),
                                  model::SpinMode::ContinuousFormula,
                                  model::Parity::Odd)
                .value;
        const DotParams iso = dot(0.5, 0.5, 1.0);
        const double c =
            qfi::qfi_from_comb(susceptibility::isotropic_comb(iso, 0.0, 0.0), iso)
                .value;
        d << " aniso_iso=" << a << " ising_even=" << b_even
          << " ising_odd=" << b_odd << " zero_mag=" << c;
        return a < 1e-12 && b_even < 1e-12 && b_odd < 1e-12 && c < 1e-12;
    });

    criterion(8, "Asymptote consistency", [](std::ostringstream& d) {
        const auto t0 = Clock::now();
        // Tail: parameters chosen so the exponent stays inside double range
        // at the dimensionless threshold beta(delta-jperp)|wbar| >= 12.
        const DotParams p = dot(0.8, 0.3, 2.0);
        const susceptibility::AnisoChi chi(p);
        double worst_tail = 0.0;
        for (double thr : {12.0, 15.0}) {
            const double w = 2.0 * (p.jz - p.jperp) * thr /
                             (p.beta() * (p.delta - p.jperp));
            const double v16 = std::log(chi(w));
            const double v21 =
                std::log(susceptibility::aniso_im_chi_asymptotic(w, p));
            worst_tail = std::max(worst_tail,
                                  std::abs(v16 - v21) / std::abs(v16));
        }
        // Slope at figure-3 parameters.
        const DotParams f3 = dot(0.4, 0.98, 5.0);
        const susceptibility::AnisoChi chi3(f3);
        const double h = 1e-4;
        const double fd = (chi3(h) - chi3(-h)) / (2.0 * h);
        const double s0 = susceptibility::aniso_im_chi_slope0(f3);
        const double slope_rel = std::abs(fd / s0 - 1.0);
        const double secs =
            std::chrono::duration<double>(Clock::now() - t0).count();
        d << " tail_log_rel=" << worst_tail << " slope_rel=" << slope_rel;
        return worst_tail <= 0.05 && slope_rel <= 0.02 && secs < 10.0;
    });

    criterion(9, "Low-T comb collapses to the ground-state comb",
              [](std::ostringstream& d) {
                  const DotParams p = dot(0.8, 0.4, 0.01, 1.0, 4.0, 1.5);
                  const auto comb = susceptibility::low_t_delta_comb(p, 4);
                  const auto gs = susceptibility::low_t_ground_state_comb(
                      p, model::SpinMode::DiscreteMinimizer);
                  if (gs.peaks.size() != 2) return false;
                  double worst = 0.0;
                  bool matched_all = true;
                  for (const auto& ref : gs.peaks) {
                      bool found = false;
                      for (const auto& pk : comb.peaks) {
                          if (std::abs(pk.omega - ref.omega) < 1e-9) {
                              worst = std::max(worst,
                                               std::abs(pk.weight - ref.weight) /
                                                   std::abs(ref.weight));
                              found = true;
                          }
                      }
                      matched_all = matched_all && found;
                  }
                  double spurious = 0.0;
                  for (const auto& pk : comb.peaks) {
                      bool matched = false;
                      for (const auto& ref : gs.peaks)
                          matched =
                              matched || std::abs(pk.omega - ref.omega) < 1e-9;
                      if (!matched)
                          spurious = std::max(spurious, std::abs(pk.weight) / kPi);
                  }
                  d << " worst_rel=" << worst << " spurious=" << spurious;
                  return matched_all && worst <= 1e-6 && spurious <= 1e-6;
              });

    criterion(10, "Qualitative trend suite", [](std::ostringstream& d) {
        const auto t0 = Clock::now();
        bool ok = true;
        // Ising QFI: increasing in T at several couplings
        for (double jz : {0.05, 0.2, 0.35, 0.5}) {
            double prev = -1.0;
            for (double T : {5.0, 20.0, 35.0, 50.0}) {
                const double v = qfi::qfi_ising(dot(jz, 0.0, T)).value;
                ok = ok && v > prev;
                prev = v;
            }
        }
        // Ising QFI: increasing in jz at several temperatures
        for (double T : {5.0, 20.0, 35.0, 50.0}) {
            double prev = -1.0;
            for (double jz : {0.05, 0.2, 0.35, 0.5}) {
                const double v = qfi::qfi_ising(dot(jz, 0.0, T)).value;
                ok = ok && v > prev;
                prev = v;
            }
        }
        // Anisotropic QFI: decreasing as jz -> jperp, increasing as T drops
        double prev = std::numeric_limits<double>::infinity();
        for (double jz : {0.2, 0.4, 0.6, 0.9}) {
            const double v = qfi::qfi_aniso(dot(jz, 0.98, 5.0)).value;
            ok = ok && v < prev;
            prev = v;
        }
        prev = -1.0;
        for (double T : {20.0, 10.0, 5.0, 2.5}) {
            const double v = qfi::qfi_aniso(dot(0.4, 0.98, T)).value;
            ok = ok && v > prev;
            prev = v;
        }
        // Low-T closed form: rising in jperp, zero at isotropy
        prev = -1.0;
        for (double jperp : {0.2, 0.4, 0.6, 0.8}) {
            const double v =
                qfi::qfi_low_t_closed(dot(0.9, jperp, 0.01),
                                      model::SpinMode::ContinuousFormula)
                    .value;
            ok = ok && v > prev;
            prev = v;
        }
        ok = ok && qfi::qfi_low_t_closed(dot(0.9, 0.9, 0.01),
                                         model::SpinMode::ContinuousFormula)
                           .value == 0.0;
        const double secs =
            std::chrono::duration<double>(Clock::now() - t0).count();
        d << " (budget 60s)";
        return ok && secs < 60.0;
    });

    criterion(11, "Special-function identities", [](std::ostringstream& d) {
        double worst = 0.0;
        for (double y : {0.1, 0.5, 1.0, 2.0}) {
            worst = std::max(worst, std::abs(numerics::f1(1.0, y) - 1.0));
            worst = std::max(worst, std::abs(numerics::f1(2.0, y) -
                                             2.0 * std::exp(y * y / 4.0)));
            worst = std::max(worst, std::abs(numerics::f2(1.0, y) -
                                             std::erf(kPi / (2.0 * y))));
        }
        d << " worst_abs=" << worst;
        return worst <= 1e-10;
    });

    criterion(12, "Desk-scale scope statement", [](std::ostringstream& d) {
        d << " absolute ED agreement with the high-T closed forms is out of"
             " reach at L <= 8 (they require many electrons); the oracle binds"
             " them only through the sum-rule identity, the convention factor,"
             " and the low-T limits";
        return true;
    });

    std::printf("%s: %d criterion(s) failed\n",
                g_failures == 0 ? "ALL PASS" : "FAILURES", g_failures);
    return g_failures;
}
