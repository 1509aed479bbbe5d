#pragma once

#include <functional>

#include "qdot/model.hpp"
#include "qdot/susceptibility.hpp"

namespace qdot::qfi {

enum class Method { CurveIntegral, CombSum, ClosedForm };

/// Paper: QFI = (4/pi) integral tanh(beta w/2) Im chi^{+-};
/// Hermitian: same with Im chi^{xx} = Im chi^{+-}/2 (exactly half).
enum class Convention { Paper, Hermitian };

struct QfiResult {
    double value = 0.0;
    Method method = Method::CurveIntegral;
    double integral_error = 0.0;  // 0 for CombSum / ClosedForm
};

/// (4/pi) integral_0^omega_max tanh(beta w/2) imchi(w) dw. The octave
/// (omega_max, 2 omega_max) must contribute < 1e-10 of the integral.
QfiResult qfi_from_curve(const std::function<double(double)>& imchi,
                         const model::DotParams& p, double omega_max,
                         Convention conv = Convention::Paper);

/// (4/pi) sum over positive-frequency peaks of w_k tanh(beta w_k/2).
QfiResult qfi_from_comb(const susceptibility::DeltaComb& comb,
                        const model::DotParams& p,
                        Convention conv = Convention::Paper);

/// 4 S tanh[(jz - jperp)(2S - 1)/(2T)], S from ground_state_spin.
QfiResult qfi_low_t_closed(const model::DotParams& p, model::SpinMode mode,
                           model::Parity parity = model::Parity::Even,
                           Convention conv = Convention::Paper);

/// Ising curve integrated with an auto-extended cutoff.
QfiResult qfi_ising(const model::DotParams& p,
                    Convention conv = Convention::Paper);

/// Anisotropic high-T curve integrated with an auto-extended cutoff;
/// exactly 0 at the isotropic point.
QfiResult qfi_aniso(const model::DotParams& p,
                    Convention conv = Convention::Paper);

/// Doubles omega_max (starting from omega_start) until the last octave
/// contributes < 1e-10 relative.
double auto_omega_max(const std::function<double(double)>& imchi,
                      const model::DotParams& p, double omega_start);

}  // namespace qdot::qfi
