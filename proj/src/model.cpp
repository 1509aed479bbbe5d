#include "qdot/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdot::model {

void DotParams::validate() const {
    if (!(delta > 0.0)) throw DomainError("DotParams: delta must be > 0");
    if (!(temperature > 0.0)) throw DomainError("DotParams: temperature must be > 0");
    if (ec < 0.0) throw DomainError("DotParams: ec must be >= 0");
    if (jz < 0.0 || jperp < 0.0)
        throw DomainError("DotParams: exchange couplings must be >= 0 (ferromagnetic)");
    if (!std::isfinite(n0) || !std::isfinite(mu))
        throw DomainError("DotParams: n0 and mu must be finite");
}

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Paramagnetic: return "Paramagnetic";
        case Phase::MesoscopicStoner: return "MesoscopicStoner";
        case Phase::Ferromagnetic: return "Ferromagnetic";
    }
    return "?";
}

RegimeReport classify_regime(const DotParams& p) {
    p.validate();
    RegimeReport r;
    const double d = p.delta;
    const bool iso = std::abs(p.jz - p.jperp) <= kIsoEps * d;

    if (std::max(p.jz, p.jperp) >= d) {
        r.phase = Phase::Ferromagnetic;
    } else if (iso && p.jz >= 0.5 * d) {
        r.phase = Phase::MesoscopicStoner;
    } else if (!iso && (d - p.jz) < p.jperp && p.jperp < p.jz) {
        r.phase = Phase::MesoscopicStoner;
    } else {
        r.phase = Phase::Paramagnetic;
    }

    r.high_t_ising_valid =
        p.jz < d && much_less(d, p.temperature) && much_less(p.temperature, p.ec);
    r.high_t_aniso_valid = much_less(d, p.temperature) && d > p.jperp - p.jz;
    r.low_t_valid = much_less(p.temperature, d);

    if (!r.high_t_ising_valid) {
        std::ostringstream m;
        m << "high-T Ising window violated: need jz < delta <= T/5 and T <= ec/5"
          << " (jz=" << p.jz << ", delta=" << d << ", T=" << p.temperature
          << ", ec=" << p.ec << ")";
        r.notes.push_back(m.str());
    }
    if (!r.high_t_aniso_valid) {
        std::ostringstream m;
        m << "high-T anisotropic window violated: need delta <= T/5 and"
          << " delta > jperp - jz (delta=" << d << ", T=" << p.temperature
          << ", jperp-jz=" << p.jperp - p.jz << ")";
        r.notes.push_back(m.str());
    }
    if (!r.low_t_valid) {
        std::ostringstream m;
        m << "low-T window violated: need T <= delta/5 (T=" << p.temperature
          << ", delta=" << d << ")";
        r.notes.push_back(m.str());
    }
    return r;
}

double ground_state_spin(const DotParams& p, SpinMode mode, Parity parity) {
    p.validate();
    if (p.jz >= p.delta)
        throw RegimeError("ground_state_spin: jz >= delta (ferromagnetic, spin extensive)");

    if (p.jperp == 0.0) return parity == Parity::Odd ? 0.5 : 0.0;

    const bool iso = std::abs(p.jz - p.jperp) <= kIsoEps * p.delta;
    if (mode == SpinMode::ContinuousFormula) {
        const double s = iso
            ? p.jz / (2.0 * (p.delta - p.jz))
            : (p.jperp + p.jz - p.delta) / (2.0 * (p.delta - p.jz));
        return std::max(0.0, s);
    }

    // Discrete minimizer of E(m) = (delta - jz) m^2 - jperp m on the
    // parity-consistent ladder.
    const double base = parity == Parity::Odd ? 0.5 : 0.0;
    const double a = p.delta - p.jz;
    const double m_star = p.jperp / (2.0 * a);
    const auto energy = [&](double m) { return a * m * m - p.jperp * m; };
    double lo = base + std::floor(m_star - base);
    if (lo < base) lo = base;
    double best = lo;
    for (double m : {lo, lo + 1.0}) {
        if (m < base) continue;
        if (energy(m) < energy(best)) best = m;
    }
    return best;
}

double j_star(const DotParams& p) {
    p.validate();
    if (p.jz >= p.delta)
        throw RegimeError("j_star: singular at jz >= delta");
    return (p.delta - p.jperp) * (p.jz - p.jperp) / (p.delta - p.jz);
}

double convert_units(double value, Unit from, Unit to, double delta_mev) {
    if (!(delta_mev > 0.0)) throw DomainError("convert_units: delta_mev must be > 0");
    double mev = 0.0;
    switch (from) {
        case Unit::Delta: mev = value * delta_mev; break;
        case Unit::meV: mev = value; break;
        case Unit::GHz: mev = value / kMevToGHz; break;
        default: throw DomainError("convert_units: unknown source unit");
    }
    switch (to) {
        case Unit::Delta: return mev / delta_mev;
        case Unit::meV: return mev;
        case Unit::GHz: return mev * kMevToGHz;
    }
    throw DomainError("convert_units: unknown target unit");
}

}  // namespace qdot::model
