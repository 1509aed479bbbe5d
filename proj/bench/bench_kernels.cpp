// Wall-clock comparison of the OpenMP kernels against their serial
// reference implementations. Each pair is also checked for bitwise equality.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "qdot/ed_oracle.hpp"
#include "qdot/model.hpp"
#include "qdot/qfi.hpp"
#include "qdot/susceptibility.hpp"

using namespace qdot;
using model::DotParams;

namespace {

DotParams dot(double jz, double jperp, double T) {
    DotParams p;
    p.jz = jz;
    p.jperp = jperp;
    p.temperature = T;
    return p;
}

struct Timing {
    double serial, parallel;
    bool identical;
};

void report(const char* name, const Timing& t) {
    std::printf("%-34s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   %s\n",
                name, 1e3 * t.serial, 1e3 * t.parallel, t.serial / t.parallel,
                t.identical ? "bitwise-identical" : "MISMATCH");
}

Timing bench_ising_curve() {
    const DotParams p = dot(0.1, 0.0, 20.0);
    const auto grid = susceptibility::default_omega_grid(p, 200000);
    const auto f = [&p](double w) { return susceptibility::ising_im_chi(w, p); };
    double t0 = omp_get_wtime();
    const auto ser = susceptibility::sample_curve_serial(f, grid, p);
    double t1 = omp_get_wtime();
    const auto par = susceptibility::sample_curve(f, grid, p);
    double t2 = omp_get_wtime();
    bool same = ser.values == par.values;
    return {t1 - t0, t2 - t1, same};
}

Timing bench_aniso_curve() {
    const DotParams p = dot(0.4, 0.98, 5.0);
    const susceptibility::AnisoChi chi(p);
    const auto grid = susceptibility::default_omega_grid(p, 4000);
    const auto f = [&chi](double w) { return chi(w); };
    double t0 = omp_get_wtime();
    const auto ser = susceptibility::sample_curve_serial(f, grid, p);
    double t1 = omp_get_wtime();
    const auto par = susceptibility::sample_curve(f, grid, p);
    double t2 = omp_get_wtime();
    return {t1 - t0, t2 - t1, ser.values == par.values};
}

Timing bench_ed_sectors() {
    auto m = ed_oracle::EDModel::equally_spaced(6);
    m.jz = 0.4;
    m.jperp = 0.6;
    m.ec = 0.5;
    m.n0 = 6.0;
    m.mu = 2.0;
    double t0 = omp_get_wtime();
    const auto ser = ed_oracle::build_and_diagonalize(m, Exec::serial);
    double t1 = omp_get_wtime();
    const auto par = ed_oracle::build_and_diagonalize(m, Exec::parallel);
    double t2 = omp_get_wtime();
    bool same = ser.sectors.size() == par.sectors.size();
    for (std::size_t k = 0; same && k < ser.sectors.size(); ++k)
        same = ser.sectors[k].eigenvalues == par.sectors[k].eigenvalues;
    return {t1 - t0, t2 - t1, same};
}

Timing bench_qfi_sweep() {
    std::vector<double> temps;
    for (int i = 0; i < 24; ++i) temps.push_back(5.0 + 2.0 * i);
    std::vector<double> ser_v(temps.size()), par_v(temps.size());
    double t0 = omp_get_wtime();
    for (std::size_t i = 0; i < temps.size(); ++i)
        ser_v[i] = qfi::qfi_ising(dot(0.2, 0.0, temps[i])).value;
    double t1 = omp_get_wtime();
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(temps.size()); ++i)
        par_v[i] = qfi::qfi_ising(dot(0.2, 0.0, temps[i])).value;
    double t2 = omp_get_wtime();
    return {t1 - t0, t2 - t1, ser_v == par_v};
}

}  // namespace

int main() {
    std::printf("threads: %d\n\n", omp_get_max_threads());
    report("ising curve, 200k points", bench_ising_curve());
    report("aniso curve, 4k points", bench_aniso_curve());
    report("ED sector diagonalization, L=6", bench_ed_sectors());
    report("ising QFI sweep, 24 points", bench_qfi_sweep());
    return 0;
}
