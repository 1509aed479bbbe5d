#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qdot/ed_oracle.hpp"

using namespace qdot;
using namespace qdot::ed_oracle;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> all_eigenvalues(const EigenSystem& es) {
    std::vector<double> e;
    for (const auto& s : es.sectors)
        for (int i = 0; i < s.eigenvalues.size(); ++i)
            e.push_back(s.eigenvalues[i]);
    std::sort(e.begin(), e.end());
    return e;
}
}  // namespace

TEST_CASE("single level: free spectrum and charging energies") {
    EDModel m = EDModel::equally_spaced(1);
    m.levels = {0.0};
    auto es = build_and_diagonalize(m);
    auto e = all_eigenvalues(es);
    REQUIRE(e.size() == 4);
    for (double v : e) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));

    m.ec = 1.0;
    m.n0 = 0.0;
    es = build_and_diagonalize(m);
    e = all_eigenvalues(es);
    CHECK(e[0] == doctest::Approx(0.0));
    CHECK(e[1] == doctest::Approx(1.0));
    CHECK(e[2] == doctest::Approx(1.0));
    CHECK(e[3] == doctest::Approx(4.0));
}

TEST_CASE("two degenerate levels: isotropic triplet-singlet splitting") {
    EDModel m;
    m.levels = {0.0, 0.0};
    m.jz = m.jperp = 0.4;  // isotropic J
    const auto es = build_and_diagonalize(m);
    // Half filling: the S = 1 triplet sits at -J S(S+1) = -2J, singlets at 0.
    const Sector* up2 = es.find(2, 2);
    REQUIRE(up2 != nullptr);
    CHECK(up2->eigenvalues.minCoeff() == doctest::Approx(-0.8).epsilon(1e-12));
    const Sector* mid = es.find(2, 0);
    REQUIRE(mid != nullptr);
    std::vector<double> ev(mid->eigenvalues.data(),
                           mid->eigenvalues.data() + mid->eigenvalues.size());
    std::sort(ev.begin(), ev.end());
    CHECK(ev.front() == doctest::Approx(-0.8).epsilon(1e-12));  // S_z = 0 triplet
    CHECK(ev.back() == doctest::Approx(0.0).epsilon(1e-12));    // singlet
}

TEST_CASE("sector bookkeeping: dimensions sum to the full space") {
    std::mt19937 rng(11);
    const auto m = random_model(3, rng);
    const auto es = build_and_diagonalize(m);
    std::size_t total = 0;
    for (const auto& s : es.sectors) {
        total += s.states.size();
        CHECK(s.eigenvalues.size() == static_cast<long>(s.states.size()));
    }
    CHECK(total == 64u);
}

TEST_CASE("parallel and serial diagonalization agree bitwise") {
    std::mt19937 rng(21);
    const auto m = random_model(4, rng);
    const auto a = build_and_diagonalize(m, Exec::parallel);
    const auto b = build_and_diagonalize(m, Exec::serial);
    REQUIRE(a.sectors.size() == b.sectors.size());
    for (std::size_t k = 0; k < a.sectors.size(); ++k) {
        REQUIRE(a.sectors[k].eigenvalues.size() ==
                b.sectors[k].eigenvalues.size());
        for (int i = 0; i < a.sectors[k].eigenvalues.size(); ++i)
            CHECK(a.sectors[k].eigenvalues[i] == b.sectors[k].eigenvalues[i]);
    }
}

TEST_CASE("lehmann_comb: infinite-temperature weights vanish") {
    std::mt19937 rng(5);
    const auto m = random_model(3, rng);
    const auto es = build_and_diagonalize(m);
    const auto comb = lehmann_comb(es, 1e8, Channel::PlusMinus);
    double wmax = 0.0;
    for (const auto& pk : comb.peaks) wmax = std::max(wmax, std::abs(pk.weight));
    CHECK(wmax < 1e-6);
    // maximally mixed limit carries no QFI
    CHECK(thermal_qfi(es, 1e8) < 1e-8);
}

TEST_CASE("lehmann_comb: odd and PlusMinus = 2 x XX") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const auto m = random_model(3, rng);
        std::uniform_real_distribution<double> tdist(0.2, 5.0);
        const double T = tdist(rng);
        const auto es = build_and_diagonalize(m);
        const auto pm = lehmann_comb(es, T, Channel::PlusMinus);
        const auto xx = lehmann_comb(es, T, Channel::XX);

        double wmax = 1e-300;
        for (const auto& pk : pm.peaks)
            wmax = std::max(wmax, std::abs(pk.weight));
        for (const auto& pk : pm.peaks) {
            double mirror = 0.0;
            for (const auto& qk : pm.peaks)
                if (std::abs(qk.omega + pk.omega) < 1e-9) mirror = qk.weight;
            CHECK(std::abs(mirror + pk.weight) <= 1e-10 * wmax);
        }
        REQUIRE(pm.peaks.size() == xx.peaks.size());
        for (std::size_t i = 0; i < pm.peaks.size(); ++i) {
            CHECK(std::abs(pm.peaks[i].omega - xx.peaks[i].omega) < 1e-9);
            CHECK(std::abs(pm.peaks[i].weight - 2.0 * xx.peaks[i].weight) <=
                  1e-10 * wmax);
        }
    }
}

TEST_CASE("thermal_qfi: tanh-kernel sum rule over the XX comb") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 6; ++trial) {
        const int L = 2 + trial % 3;
        const auto m = random_model(L, rng);
        std::uniform_real_distribution<double> tdist(0.2, 5.0);
        const double T = tdist(rng);
        const auto es = build_and_diagonalize(m);
        const auto xx = lehmann_comb(es, T, Channel::XX);
        double sum = 0.0;
        for (const auto& pk : xx.peaks)
            if (pk.omega > 1e-9)
                sum += pk.weight * std::tanh(0.5 * pk.omega / T);
        sum *= 4.0 / kPi;
        const double fq = thermal_qfi(es, T);
        CHECK(fq == doctest::Approx(sum).epsilon(1e-8));
        CHECK(fq <= 4.0 * thermal_variance_sx(es, T) * (1.0 + 1e-10) + 1e-12);
    }
}

TEST_CASE("thermal_qfi: pure-state limit 4 Var(S_x)") {
    EDModel m = EDModel::equally_spaced(2);
    m.jz = 0.3;
    m.jperp = 0.2;
    m.ec = 0.5;
    m.n0 = 2.0;
    m.mu = 0.6;
    const auto es = build_and_diagonalize(m);
    const double T = 1e-3;
    CHECK(thermal_qfi(es, T) ==
          doctest::Approx(4.0 * thermal_variance_sx(es, T)).epsilon(1e-6));
}

TEST_CASE("isotropic exchange: no finite-frequency XX weight") {
    EDModel m = EDModel::equally_spaced(3);
    m.jz = m.jperp = 0.4;
    m.ec = 0.3;
    m.n0 = 3.0;
    m.mu = 1.0;
    const auto es = build_and_diagonalize(m);
    const auto xx = lehmann_comb(es, 0.7, Channel::XX);
    for (const auto& pk : xx.peaks)
        if (std::abs(pk.omega) > 1e-9) CHECK(std::abs(pk.weight) < 1e-10);
}

TEST_CASE("charging term is constant within a fixed-N sector") {
    EDModel m = EDModel::equally_spaced(3);
    m.jz = 0.3;
    m.jperp = 0.5;
    m.n0 = 2.0;
    EDModel m_ec = m;
    m_ec.ec = 50.0;
    const auto a = build_and_diagonalize(m);
    const auto b = build_and_diagonalize(m_ec);
    for (int m2 : {-2, 0, 2}) {
        const Sector* sa = a.find(2, m2);
        const Sector* sb = b.find(2, m2);
        REQUIRE(sa != nullptr);
        REQUIRE(sb != nullptr);
        // (n - n0)^2 = 0 in this sector: spectra identical
        for (int i = 0; i < sa->eigenvalues.size(); ++i)
            CHECK(sa->eigenvalues[i] ==
                  doctest::Approx(sb->eigenvalues[i]).epsilon(1e-12));
    }
    // one electron away: uniform shift by ec
    const Sector* sa = a.find(1, 1);
    const Sector* sb = b.find(1, 1);
    for (int i = 0; i < sa->eigenvalues.size(); ++i)
        CHECK(sb->eigenvalues[i] - sa->eigenvalues[i] ==
              doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("oracle_report: random models pass every check") {
    std::mt19937 rng(12345);
    for (int L : {1, 2, 3}) {
        const auto m = random_model(L, rng);
        const auto rep = oracle_report(m, 0.5);
        for (const auto& c : rep.checks) {
            INFO(c.name << " residual=" << c.residual << " " << c.detail);
            CHECK(c.pass);
        }
        CHECK(rep.all_pass);
    }
}

TEST_CASE("model validation") {
    EDModel m;
    CHECK_THROWS_AS(m.validate(), DomainError);
    m = EDModel::equally_spaced(9);
    CHECK_THROWS_AS(m.validate(), DomainError);
    CHECK_THROWS_AS(build_and_diagonalize(m), DomainError);
}
