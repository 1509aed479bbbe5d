#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qdot/model.hpp"
#include "qdot/susceptibility.hpp"

namespace qdot::ed_oracle {

inline constexpr int kMaxLevels = 8;

struct EDModel {
    std::vector<double> levels;  // single-particle energies eps_alpha
    double jz = 0.0;
    double jperp = 0.0;
    double ec = 0.0;
    double n0 = 0.0;
    double mu = 0.0;

    int num_levels() const { return static_cast<int>(levels.size()); }
    void validate() const;  // 1 <= L <= 8

    static EDModel equally_spaced(int num_levels, double delta = 1.0);
};

/// One (N, M = 2 S_z) block. Occupation bitstrings are spin-interleaved:
/// bit 2a = (a, up), bit 2a+1 = (a, down), ascending-index operator ordering.
struct Sector {
    int n = 0;   // electron count
    int m2 = 0;  // 2 * S_z = n_up - n_dn
    std::vector<std::uint32_t> states;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // columns, occupation basis
};

struct EigenSystem {
    EDModel mdl;
    std::vector<Sector> sectors;
    /// splus_to[k] = index of the (n, m2+2) sector reachable from sector k
    /// by S_+, or -1; splus_eig[k] = <eig_to| S_+ |eig_from> matrix.
    std::vector<int> splus_to;
    std::vector<Eigen::MatrixXd> splus_eig;

    const Sector* find(int n, int m2) const;
};

EigenSystem build_and_diagonalize(const EDModel& m, Exec exec = Exec::parallel);

enum class Channel { PlusMinus, XX };

/// Lehmann delta comb: peaks at omega = E_m - E_n with weights
/// pi (p_n - p_m) |<m|O|n>|^2 over the grand ensemble, merged.
susceptibility::DeltaComb lehmann_comb(const EigenSystem& es, double T,
                                       Channel channel);

enum class Generator { Sx };

/// Thermal QFI 2 sum (p_m - p_n)^2/(p_m + p_n) |<m|S_x|n>|^2.
double thermal_qfi(const EigenSystem& es, double T,
                   Generator gen = Generator::Sx);

/// <S_x^2> - <S_x>^2 in the thermal state (upper bound QFI <= 4 Var).
double thermal_variance_sx(const EigenSystem& es, double T);

struct Check {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    std::string detail;
};

struct OracleReport {
    std::vector<Check> checks;
    bool all_pass = false;
};

/// Bundled identity checks: the tanh-kernel sum rule against the Lehmann
/// comb, PlusMinus = 2 x XX, the variance bound, comb oddness, hermiticity /
/// reconstruction / sector closure.
OracleReport oracle_report(const EDModel& m, double T);

/// Deterministic random model for oracle sweeps: couplings uniform in
/// [0, 0.8 delta], ec in [0, 2 delta], half-filling-ish n0 and mu.
EDModel random_model(int num_levels, std::mt19937& rng, double delta = 1.0);

}  // namespace qdot::ed_oracle
