#include "qdot/ed_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

namespace qdot::ed_oracle {

namespace {
constexpr double kPi = 3.14159265358979323846;

int popcount(std::uint32_t v) { return std::popcount(v); }

// Parity sign of occupied modes below bit index b (ascending-index ordering).
double jw_sign(std::uint32_t state, int b) {
    const std::uint32_t below = state & ((1u << b) - 1u);
    return popcount(below) % 2 == 0 ? 1.0 : -1.0;
}

struct Amplitude {
    std::uint32_t state;
    double amp;
};

// S_+ = sum_a adag_{a,up} a_{a,dn}; bit 2a = (a,up), bit 2a+1 = (a,dn).
std::vector<Amplitude> apply_splus(std::uint32_t s, int levels) {
    std::vector<Amplitude> out;
    for (int a = 0; a < levels; ++a) {
        const int up = 2 * a, dn = 2 * a + 1;
        if ((s >> dn & 1u) == 0u || (s >> up & 1u) != 0u) continue;
        double amp = jw_sign(s, dn);
        const std::uint32_t t = s ^ (1u << dn);
        amp *= jw_sign(t, up);
        out.push_back({t | (1u << up), amp});
    }
    return out;
}

std::vector<Amplitude> apply_sminus(std::uint32_t s, int levels) {
    std::vector<Amplitude> out;
    for (int a = 0; a < levels; ++a) {
        const int up = 2 * a, dn = 2 * a + 1;
        if ((s >> up & 1u) == 0u || (s >> dn & 1u) != 0u) continue;
        double amp = jw_sign(s, up);
        const std::uint32_t t = s ^ (1u << up);
        amp *= jw_sign(t, dn);
        out.push_back({t | (1u << dn), amp});
    }
    return out;
}

int count_n(std::uint32_t s) { return popcount(s); }

int count_m2(std::uint32_t s, int levels) {
    int m2 = 0;
    for (int a = 0; a < levels; ++a) {
        m2 += (s >> (2 * a) & 1u);
        m2 -= (s >> (2 * a + 1) & 1u);
    }
    return m2;
}

double diagonal_energy(std::uint32_t s, const EDModel& m) {
    double e = 0.0;
    for (int a = 0; a < m.num_levels(); ++a) {
        const int occ = (s >> (2 * a) & 1u) + (s >> (2 * a + 1) & 1u);
        e += m.levels[a] * occ;
    }
    const double n = count_n(s);
    const double sz = 0.5 * count_m2(s, m.num_levels());
    e += m.ec * (n - m.n0) * (n - m.n0);
    e -= m.jz * sz * sz;
    return e;
}

Eigen::MatrixXd build_sector_hamiltonian(const Sector& sec, const EDModel& m) {
    const int dim = static_cast<int>(sec.states.size());
    const int levels = m.num_levels();
    std::map<std::uint32_t, int> index;
    for (int i = 0; i < dim; ++i) index[sec.states[i]] = i;

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        const std::uint32_t s = sec.states[j];
        h(j, j) += diagonal_energy(s, m);
        if (m.jperp == 0.0) continue;
        // -(jperp/2)(S+S- + S-S+)
        for (const auto& mid : apply_sminus(s, levels)) {
            for (const auto& fin : apply_splus(mid.state, levels)) {
                h(index.at(fin.state), j) += -0.5 * m.jperp * mid.amp * fin.amp;
            }
        }
        for (const auto& mid : apply_splus(s, levels)) {
            for (const auto& fin : apply_sminus(mid.state, levels)) {
                h(index.at(fin.state), j) += -0.5 * m.jperp * mid.amp * fin.amp;
            }
        }
    }
    return h;
}

struct ThermalWeights {
    // weights[k][i]: normalized grand-canonical weight of eigenstate i of
    // sector k.
    std::vector<std::vector<double>> weights;
};

ThermalWeights thermal_weights(const EigenSystem& es, double T) {
    if (!(T > 0.0)) throw DomainError("thermal weights: T must be > 0");
    const double beta = 1.0 / T;
    double emin = std::numeric_limits<double>::infinity();
    for (const auto& sec : es.sectors) {
        for (int i = 0; i < sec.eigenvalues.size(); ++i)
            emin = std::min(emin, sec.eigenvalues[i] - es.mdl.mu * sec.n);
    }
    ThermalWeights tw;
    tw.weights.resize(es.sectors.size());
    double z = 0.0;
    for (std::size_t k = 0; k < es.sectors.size(); ++k) {
        const auto& sec = es.sectors[k];
        tw.weights[k].resize(sec.eigenvalues.size());
        for (int i = 0; i < sec.eigenvalues.size(); ++i) {
            const double w = std::exp(
                -beta * (sec.eigenvalues[i] - es.mdl.mu * sec.n - emin));
            tw.weights[k][i] = w;
            z += w;
        }
    }
    for (auto& v : tw.weights)
        for (double& w : v) w /= z;
    return tw;
}

model::DotParams comb_params(const EDModel& m, double T) {
    model::DotParams p;
    double spacing = 1.0;
    if (m.num_levels() > 1) {
        const auto [lo, hi] =
            std::minmax_element(m.levels.begin(), m.levels.end());
        spacing = (*hi - *lo) / (m.num_levels() - 1);
    }
    p.delta = spacing > 0.0 ? spacing : 1.0;
    p.jz = m.jz;
    p.jperp = m.jperp;
    p.ec = m.ec;
    p.n0 = m.n0;
    p.mu = m.mu;
    p.temperature = T;
    return p;
}

}  // namespace

void EDModel::validate() const {
    if (num_levels() < 1 || num_levels() > kMaxLevels)
        throw DomainError("EDModel: need 1 <= levels <= 8");
    if (jz < 0.0 || jperp < 0.0 || ec < 0.0)
        throw DomainError("EDModel: couplings must be >= 0");
}

EDModel EDModel::equally_spaced(int num_levels, double delta) {
    EDModel m;
    m.levels.resize(num_levels);
    for (int a = 0; a < num_levels; ++a) m.levels[a] = a * delta;
    return m;
}

const Sector* EigenSystem::find(int n, int m2) const {
    for (const auto& s : sectors)
        if (s.n == n && s.m2 == m2) return &s;
    return nullptr;
}

EigenSystem build_and_diagonalize(const EDModel& m, Exec exec) {
    m.validate();
    const int levels = m.num_levels();
    const std::uint32_t dim = 1u << (2 * levels);

    EigenSystem es;
    es.mdl = m;
    std::map<std::pair<int, int>, std::vector<std::uint32_t>> blocks;
    for (std::uint32_t s = 0; s < dim; ++s)
        blocks[{count_n(s), count_m2(s, levels)}].push_back(s);
    for (auto& [key, states] : blocks) {
        Sector sec;
        sec.n = key.first;
        sec.m2 = key.second;
        sec.states = std::move(states);
        es.sectors.push_back(std::move(sec));
    }

    const long nsec = static_cast<long>(es.sectors.size());
    std::exception_ptr err = nullptr;
    std::atomic<bool> failed{false};
    const auto solve_one = [&](long k) {
        auto& sec = es.sectors[k];
        const Eigen::MatrixXd h = build_sector_hamiltonian(sec, m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
        if (solver.info() != Eigen::Success) {
            std::ostringstream msg;
            msg << "eigensolver failed in sector (N=" << sec.n
                << ", M=" << sec.m2 << ")";
            throw Error(msg.str());
        }
        sec.eigenvalues = solver.eigenvalues();
        sec.eigenvectors = solver.eigenvectors();
    };

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long k = 0; k < nsec; ++k) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                solve_one(k);
            } catch (...) {
#pragma omp critical
                {
                    if (!err) err = std::current_exception();
                }
                failed.store(true, std::memory_order_relaxed);
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (long k = 0; k < nsec; ++k) solve_one(k);
    }

    // S+ matrix elements between (N, M) and (N, M+2), rotated to eigenbases.
    es.splus_to.assign(es.sectors.size(), -1);
    es.splus_eig.resize(es.sectors.size());
    for (std::size_t k = 0; k < es.sectors.size(); ++k) {
        const auto& from = es.sectors[k];
        int to_idx = -1;
        for (std::size_t k2 = 0; k2 < es.sectors.size(); ++k2) {
            if (es.sectors[k2].n == from.n && es.sectors[k2].m2 == from.m2 + 2) {
                to_idx = static_cast<int>(k2);
                break;
            }
        }
        if (to_idx < 0) continue;
        const auto& to = es.sectors[to_idx];
        std::map<std::uint32_t, int> to_index;
        for (std::size_t i = 0; i < to.states.size(); ++i)
            to_index[to.states[i]] = static_cast<int>(i);
        Eigen::MatrixXd sp = Eigen::MatrixXd::Zero(
            static_cast<int>(to.states.size()),
            static_cast<int>(from.states.size()));
        for (std::size_t j = 0; j < from.states.size(); ++j) {
            for (const auto& a : apply_splus(from.states[j], levels))
                sp(to_index.at(a.state), static_cast<int>(j)) += a.amp;
        }
        es.splus_to[k] = to_idx;
        es.splus_eig[k] = to.eigenvectors.transpose() * sp * from.eigenvectors;
    }
    return es;
}

susceptibility::DeltaComb lehmann_comb(const EigenSystem& es, double T,
                                       Channel channel) {
    const auto tw = thermal_weights(es, T);
    std::vector<susceptibility::Peak> peaks;
    for (std::size_t k = 0; k < es.sectors.size(); ++k) {
        if (es.splus_to[k] < 0) continue;
        const auto& from = es.sectors[k];
        const auto& to = es.sectors[es.splus_to[k]];
        const auto& sp = es.splus_eig[k];
        for (int i = 0; i < from.eigenvalues.size(); ++i) {
            for (int j = 0; j < to.eigenvalues.size(); ++j) {
                const double me2 = sp(j, i) * sp(j, i);
                if (me2 == 0.0) continue;
                const double dp = tw.weights[k][i] - tw.weights[es.splus_to[k]][j];
                const double omega = to.eigenvalues[j] - from.eigenvalues[i];
                if (channel == Channel::PlusMinus) {
                    peaks.push_back({omega, kPi * dp * me2});
                } else {
                    peaks.push_back({omega, kPi * dp * me2 / 4.0});
                    peaks.push_back({-omega, -kPi * dp * me2 / 4.0});
                }
            }
        }
    }
    return susceptibility::merge_comb(std::move(peaks),
                                      comb_params(es.mdl, T));
}

double thermal_qfi(const EigenSystem& es, double T, Generator gen) {
    if (gen != Generator::Sx)
        throw DomainError("thermal_qfi: only the S_x generator is implemented");
    const auto tw = thermal_weights(es, T);
    double f = 0.0;
    for (std::size_t k = 0; k < es.sectors.size(); ++k) {
        if (es.splus_to[k] < 0) continue;
        const auto& from = es.sectors[k];
        const auto& to = es.sectors[es.splus_to[k]];
        const auto& sp = es.splus_eig[k];
        for (int i = 0; i < from.eigenvalues.size(); ++i) {
            for (int j = 0; j < to.eigenvalues.size(); ++j) {
                const double me2 = sp(j, i) * sp(j, i);
                if (me2 == 0.0) continue;
                const double pi_ = tw.weights[k][i];
                const double pj_ = tw.weights[es.splus_to[k]][j];
                if (pi_ + pj_ < 1e-300) continue;
                f += (pi_ - pj_) * (pi_ - pj_) / (pi_ + pj_) * me2;
            }
        }
    }
    return f;
}

double thermal_variance_sx(const EigenSystem& es, double T) {
    const auto tw = thermal_weights(es, T);
    double sx2 = 0.0;
    for (std::size_t k = 0; k < es.sectors.size(); ++k) {
        if (es.splus_to[k] < 0) continue;
        const auto& from = es.sectors[k];
        const auto& to = es.sectors[es.splus_to[k]];
        const auto& sp = es.splus_eig[k];
        for (int i = 0; i < from.eigenvalues.size(); ++i) {
            for (int j = 0; j < to.eigenvalues.size(); ++j) {
                const double me2 = sp(j, i) * sp(j, i);
                sx2 += 0.25 * me2 *
                       (tw.weights[k][i] + tw.weights[es.splus_to[k]][j]);
            }
        }
    }
    return sx2;  // <S_x> = 0: S_x has no within-sector elements
}

OracleReport oracle_report(const EDModel& m, double T) {
    OracleReport rep;
    const auto es = build_and_diagonalize(m);
    const auto xx = lehmann_comb(es, T, Channel::XX);
    const auto pm = lehmann_comb(es, T, Channel::PlusMinus);
    const double fq = thermal_qfi(es, T);
    const double var = thermal_variance_sx(es, T);
    const double eps = susceptibility::kMergeEps * comb_params(m, T).delta;
    const double beta = 1.0 / T;

    {  // tanh-kernel sum rule over the XX comb
        double combsum = 0.0;
        for (const auto& pk : xx.peaks)
            if (pk.omega > eps)
                combsum += pk.weight * std::tanh(0.5 * beta * pk.omega);
        combsum *= 4.0 / kPi;
        const double rel = std::abs(fq - combsum) / std::max(std::abs(fq), 1e-30);
        std::ostringstream d;
        d << "thermal_qfi=" << fq << " combsum=" << combsum;
        rep.checks.push_back({"eq15_identity", rel <= 1e-8 || (fq == 0 && combsum == 0),
                              rel, d.str()});
    }
    {  // PlusMinus weights = 2 x XX weights, peak by peak
        double residual = 0.0;
        bool pass = pm.peaks.size() == xx.peaks.size();
        if (pass) {
            double wmax = 1e-300;
            for (const auto& pk : pm.peaks) wmax = std::max(wmax, std::abs(pk.weight));
            for (std::size_t i = 0; i < pm.peaks.size(); ++i) {
                if (std::abs(pm.peaks[i].omega - xx.peaks[i].omega) > eps) {
                    pass = false;
                    break;
                }
                residual = std::max(
                    residual,
                    std::abs(pm.peaks[i].weight - 2.0 * xx.peaks[i].weight) / wmax);
            }
            pass = pass && residual <= 1e-10;
        }
        std::ostringstream d;
        d << pm.peaks.size() << " vs " << xx.peaks.size() << " peaks";
        rep.checks.push_back({"plusminus_twice_xx", pass, residual, d.str()});
    }
    {  // QFI <= 4 Var(S_x)
        const double bound = 4.0 * var;
        const bool pass = fq <= bound * (1.0 + 1e-10) + 1e-12;
        std::ostringstream d;
        d << "qfi=" << fq << " 4var=" << bound;
        rep.checks.push_back(
            {"variance_bound", pass, std::max(0.0, fq - bound), d.str()});
    }
    {  // comb oddness after ensemble summation
        double residual = 0.0;
        double wmax = 1e-300;
        for (const auto& pk : pm.peaks) wmax = std::max(wmax, std::abs(pk.weight));
        for (const auto& pk : pm.peaks) {
            if (pk.omega <= eps) {
                if (std::abs(pk.omega) <= eps)
                    residual = std::max(residual, std::abs(pk.weight) / wmax);
                continue;
            }
            double mirror = 0.0;
            for (const auto& qk : pm.peaks)
                if (std::abs(qk.omega + pk.omega) <= eps) mirror = qk.weight;
            residual = std::max(residual, std::abs(mirror + pk.weight) / wmax);
        }
        rep.checks.push_back({"comb_odd", residual <= 1e-10, residual, ""});
    }
    {  // H block-diagonality over (N, M) sectors
        double residual = 0.0;
        const int levels = m.num_levels();
        for (const auto& sec : es.sectors) {
            for (const auto s : sec.states) {
                for (const auto& mid : apply_sminus(s, levels))
                    for (const auto& fin : apply_splus(mid.state, levels))
                        if (count_n(fin.state) != sec.n ||
                            count_m2(fin.state, levels) != sec.m2)
                            residual = std::max(residual,
                                                std::abs(mid.amp * fin.amp));
                for (const auto& mid : apply_splus(s, levels))
                    for (const auto& fin : apply_sminus(mid.state, levels))
                        if (count_n(fin.state) != sec.n ||
                            count_m2(fin.state, levels) != sec.m2)
                            residual = std::max(residual,
                                                std::abs(mid.amp * fin.amp));
            }
        }
        rep.checks.push_back({"sector_closure", residual <= 1e-12, residual, ""});
    }
    {  // hermiticity and eigendecomposition reconstruction
        double herm = 0.0, recon = 0.0;
        for (const auto& sec : es.sectors) {
            const Eigen::MatrixXd h = build_sector_hamiltonian(sec, m);
            const double scale = std::max(h.norm(), 1e-300);
            herm = std::max(herm, (h - h.transpose()).norm() / scale);
            const Eigen::MatrixXd r =
                sec.eigenvectors * sec.eigenvalues.asDiagonal() *
                sec.eigenvectors.transpose();
            recon = std::max(recon, (r - h).norm() / scale);
        }
        rep.checks.push_back({"hermiticity", herm <= 1e-12, herm, ""});
        rep.checks.push_back({"reconstruction", recon <= 1e-10, recon, ""});
    }

    rep.all_pass = true;
    for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

EDModel random_model(int num_levels, std::mt19937& rng, double delta) {
    EDModel m = EDModel::equally_spaced(num_levels, delta);
    std::uniform_real_distribution<double> coupling(0.0, 0.8 * delta);
    std::uniform_real_distribution<double> charging(0.0, 2.0 * delta);
    std::uniform_real_distribution<double> filling(num_levels - 1.0,
                                                   num_levels + 1.0);
    std::uniform_real_distribution<double> chem(0.2, 0.8);
    m.jz = coupling(rng);
    m.jperp = coupling(rng);
    m.ec = charging(rng);
    m.n0 = filling(rng);
    m.mu = chem(rng) * (num_levels - 1.0) * delta;
    return m;
}

}  // namespace qdot::ed_oracle
