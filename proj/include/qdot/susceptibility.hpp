#pragma once

#include <functional>
#include <vector>

#include "qdot/model.hpp"

namespace qdot::susceptibility {

/// Peak merge tolerance (in units of delta): ladder frequencies
/// (jz-jperp)(2l +- 1) coincide exactly for adjacent l and must combine.
inline constexpr double kMergeEps = 1e-9;

struct SpectralCurve {
    std::vector<double> omegas;  // strictly increasing, units of delta
    std::vector<double> values;  // Im chi, units of 1/delta
    model::DotParams params;
    model::RegimeReport regime;
    int raw_sign = +1;  // sign of the literal formula before absorption normalization
};

struct Peak {
    double omega = 0.0;
    double weight = 0.0;
};

struct DeltaComb {
    std::vector<Peak> peaks;  // sorted by omega, merged within kMergeEps*delta
    model::DotParams params;
    model::RegimeReport regime;
    std::vector<std::string> notes;
};

struct CurveAnalysis {
    double peak_omega = 0.0;
    double peak_value = 0.0;
    double fwhm = 0.0;
    bool single_max = false;
};

/// Ising closed form for Im chi^{+-}(omega); requires jperp = 0, 0 < jz < delta.
double ising_im_chi(double omega, const model::DotParams& p);

/// Static limit Re chi^{+-}(0) = e^{beta(delta+jz)/4}/delta.
double ising_static_chi(const model::DotParams& p);

/// Peak-location estimate omega_0 = sqrt(2 T jz^2/(delta - jz)).
double ising_peak_estimate(const model::DotParams& p);

/// Smooth anisotropic high-T evaluator. Caches Z_S; absorption-positive.
class AnisoChi {
public:
    explicit AnisoChi(const model::DotParams& p);
    /// Literal formula value, before absorption-sign normalization.
    double raw(double omega) const;
    /// Absorption-positive branch: >= 0 for omega > 0, odd in omega.
    double operator()(double omega) const { return sign_ * raw(omega); }
    int raw_sign() const { return sign_; }
    double zs() const { return zs_; }

private:
    model::DotParams p_;
    double zs_ = 0.0;
    int sign_ = +1;
};

/// One-shot wrappers over AnisoChi (construct the evaluator for sweeps).
double aniso_im_chi(double omega, const model::DotParams& p);

/// Large-frequency asymptote, absorption-positive, odd in omega.
double aniso_im_chi_asymptotic(double omega, const model::DotParams& p);

/// Coefficient of omega in the omega -> 0 linear law (positive).
double aniso_im_chi_slope0(const model::DotParams& p);

/// Low-temperature delta comb from the grand-partition enumeration.
DeltaComb low_t_delta_comb(const model::DotParams& p, int n_cut);

/// Ground-state two-peak comb:
/// (+omega_S, +pi S), (-omega_S, -pi S), omega_S = (jz-jperp)(2S-1).
/// Degenerate cases (S < 1/2, jz <= jperp, or omega_S = 0) return an empty
/// comb with an explanatory note.
DeltaComb low_t_ground_state_comb(const model::DotParams& p,
                                  model::SpinMode mode,
                                  model::Parity parity = model::Parity::Even);

/// Isotropic response 2 pi M delta(omega - b); empty when M = 0.
DeltaComb isotropic_comb(const model::DotParams& p, double magnetization,
                         double field_b);

/// Peak (quadratic interpolation), FWHM (linear interpolation of half-max
/// crossings), single-maximum flag.
CurveAnalysis analyze_curve(const SpectralCurve& c);

/// Sort peaks, merge within eps, drop weights below 1e-12 of the total.
DeltaComb merge_comb(std::vector<Peak> peaks, const model::DotParams& p);

/// Default frequency grid: linear on [0, max(3*omega_0, 10|jz-jperp|(2S+3))].
std::vector<double> default_omega_grid(const model::DotParams& p,
                                       int points = 400);

using PointFn = std::function<double(double)>;

/// Sample a curve on a grid. The OpenMP kernel and the serial reference
/// produce bitwise-identical results (independent pure evaluations).
SpectralCurve sample_curve(const PointFn& f, std::vector<double> omegas,
                           const model::DotParams& p);
SpectralCurve sample_curve_serial(const PointFn& f, std::vector<double> omegas,
                                  const model::DotParams& p);

}  // namespace qdot::susceptibility
