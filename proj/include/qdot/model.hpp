#pragma once

#include <string>
#include <vector>

#include "qdot/errors.hpp"

namespace qdot::model {

enum class Phase { Paramagnetic, MesoscopicStoner, Ferromagnetic };
enum class SpinMode { ContinuousFormula, DiscreteMinimizer };
enum class Parity { Even, Odd };
enum class Unit { Delta, meV, GHz };

/// Physical parameters of one dot. Energies in units of the mean level
/// spacing delta by default; k_B = hbar = 1.
struct DotParams {
    double delta = 1.0;        // mean level spacing
    double jz = 0.0;           // longitudinal exchange
    double jperp = 0.0;        // transverse exchange
    double ec = 0.0;           // charging energy
    double n0 = 0.0;           // background charge
    double mu = 0.0;           // chemical potential
    double temperature = 1.0;  // T

    double beta() const { return 1.0 / temperature; }
    void validate() const;  // throws DomainError on invariant violations
};

struct RegimeReport {
    Phase phase = Phase::Paramagnetic;
    bool high_t_ising_valid = false;  // J_z < delta << T << E_c
    bool high_t_aniso_valid = false;  // T >> delta > J_perp - J_z
    bool low_t_valid = false;         // T << delta
    std::vector<std::string> notes;   // violated conditions
};

/// "a << b" operationalized as a <= b/5 for validity flags.
inline bool much_less(double a, double b) { return a <= b / 5.0; }

/// |jz - jperp| below this (times delta) counts as isotropic.
inline constexpr double kIsoEps = 1e-9;

/// 1 meV in GHz (E = h f).
inline constexpr double kMevToGHz = 241.799;

const char* phase_name(Phase p);

RegimeReport classify_regime(const DotParams& p);

/// Ground-state total spin. ContinuousFormula: the closed forms
/// S = J/[2(delta-J)] (isotropic) and S = (jperp+jz-delta)/[2(delta-jz)]
/// (anisotropic), clamped at 0. DiscreteMinimizer: argmin over the
/// parity-consistent ladder of E(m) = (delta-jz) m^2 - jperp m.
/// Pure Ising (jperp = 0) returns 0 (even) or 1/2 (odd).
double ground_state_spin(const DotParams& p, SpinMode mode,
                         Parity parity = Parity::Even);

/// J_* = (delta - jperp)(jz - jperp)/(delta - jz).
double j_star(const DotParams& p);

double convert_units(double value, Unit from, Unit to, double delta_mev);

}  // namespace qdot::model
