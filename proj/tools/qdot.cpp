#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "qdot/ed_oracle.hpp"
#include "qdot/emit.hpp"
#include "qdot/model.hpp"
#include "qdot/partition.hpp"
#include "qdot/qfi.hpp"
#include "qdot/susceptibility.hpp"

namespace {

using namespace qdot;
using model::DotParams;

struct Options {
    DotParams p;
    double omega_min = 0.0;
    double omega_max = -1.0;  // <0: automatic grid
    int points = 400;
    std::string sweep;
    std::string range;  // start:stop:n
    std::string unit = "delta";
    double delta_mev = 1.0;
    std::string convention = "paper";
    std::string spin_mode = "continuous";
    std::string parity = "even";
    std::string format = "csv";
    std::string out;
    std::string mdl;
    int ncut = 0;  // 0: automatic window
    double magnetization = 0.0;
    double field = 0.0;
    unsigned seed = 12345;
};

void add_param_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--delta", o.p.delta, "Mean level spacing");
    cmd->add_option("--jz", o.p.jz, "Longitudinal exchange J_z");
    cmd->add_option("--jperp", o.p.jperp, "Transverse exchange J_perp");
    cmd->add_option("--ec", o.p.ec, "Charging energy E_c");
    cmd->add_option("--n0", o.p.n0, "Background charge N_0");
    cmd->add_option("--mu", o.p.mu, "Chemical potential");
    cmd->add_option("--temp", o.p.temperature, "Temperature");
    cmd->add_option("--unit", o.unit, "Unit of energy inputs/outputs")
        ->check(CLI::IsMember({"delta", "mev", "ghz"}));
    cmd->add_option("--delta-mev", o.delta_mev, "Level spacing in meV");
    cmd->set_config("--config");
}

void add_output_flags(CLI::App* cmd, Options& o, bool required_out) {
    auto* opt = cmd->add_option("--out", o.out, "Output path (or prefix for sweeps)");
    if (required_out) opt->required();
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

model::Unit parse_unit(const std::string& s) {
    if (s == "delta") return model::Unit::Delta;
    if (s == "mev") return model::Unit::meV;
    if (s == "ghz") return model::Unit::GHz;
    throw DomainError("unknown unit: " + s);
}

qfi::Convention parse_convention(const std::string& s) {
    return s == "hermitian" ? qfi::Convention::Hermitian : qfi::Convention::Paper;
}

model::SpinMode parse_spin_mode(const std::string& s) {
    return s == "discrete" ? model::SpinMode::DiscreteMinimizer
                           : model::SpinMode::ContinuousFormula;
}

model::Parity parse_parity(const std::string& s) {
    return s == "odd" ? model::Parity::Odd : model::Parity::Even;
}

// Energies arrive in the requested unit; computations run in delta units.
double to_internal(double v, const Options& o) {
    const model::Unit u = parse_unit(o.unit);
    return u == model::Unit::Delta
               ? v
               : model::convert_units(v, u, model::Unit::Delta, o.delta_mev);
}

double from_internal(double v, const Options& o) {
    const model::Unit u = parse_unit(o.unit);
    return u == model::Unit::Delta
               ? v
               : model::convert_units(v, model::Unit::Delta, u, o.delta_mev);
}

void convert_inputs(Options& o) {
    o.p.delta = to_internal(o.p.delta, o);
    o.p.jz = to_internal(o.p.jz, o);
    o.p.jperp = to_internal(o.p.jperp, o);
    o.p.ec = to_internal(o.p.ec, o);
    o.p.mu = to_internal(o.p.mu, o);
    o.p.temperature = to_internal(o.p.temperature, o);
    o.omega_min = to_internal(o.omega_min, o);
    if (o.omega_max > 0) o.omega_max = to_internal(o.omega_max, o);
    o.field = to_internal(o.field, o);
}

bool param_is_energy(const std::string& name) { return name != "n0"; }

void set_param(DotParams& p, const std::string& name, double v) {
    if (name == "delta") p.delta = v;
    else if (name == "jz") p.jz = v;
    else if (name == "jperp") p.jperp = v;
    else if (name == "ec") p.ec = v;
    else if (name == "n0") p.n0 = v;
    else if (name == "mu") p.mu = v;
    else if (name == "temp") p.temperature = v;
    else throw DomainError("unknown sweep parameter: " + name);
}

std::vector<double> parse_range(const std::string& range) {
    double start = 0, stop = 0;
    int n = 0;
    if (std::sscanf(range.c_str(), "%lf:%lf:%d", &start, &stop, &n) != 3 ||
        n < 2 || !(start < stop))
        throw DomainError("range must be start:stop:n with n >= 2, start < stop");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = start + (stop - start) * i / (n - 1);
    return v;
}

std::string value_tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string sweep_path(const std::string& out, const std::string& param,
                       double value, const std::string& ext) {
    std::filesystem::path p(out);
    std::string stem = p.stem().string();
    std::string dir = p.parent_path().string();
    std::string name = stem + "_" + param + "=" + value_tag(value) + ext;
    return dir.empty() ? name : dir + "/" + name;
}

std::string ext_of(const Options& o) {
    return o.format == "json" ? ".json" : ".csv";
}

void emit_curve(susceptibility::SpectralCurve c, const Options& o,
                const std::string& path) {
    for (auto& w : c.omegas) w = from_internal(w, o);
    if (o.format == "json")
        emit::write_file(path, emit::curve_json(c).dump(2) + "\n");
    else
        emit::write_file(path, emit::curve_csv(c));
    std::cout << path << "\n";
}

void emit_comb(susceptibility::DeltaComb c, const Options& o,
               const std::string& path) {
    for (auto& pk : c.peaks) pk.omega = from_internal(pk.omega, o);
    if (o.format == "json")
        emit::write_file(path, emit::comb_json(c).dump(2) + "\n");
    else
        emit::write_file(path, emit::comb_csv(c));
    std::cout << path << "\n";
}

std::vector<double> make_grid(const Options& o, const DotParams& p) {
    if (o.omega_max > 0) {
        if (!(o.omega_min < o.omega_max) || o.points < 2)
            throw DomainError("need omega-min < omega-max and points >= 2");
        std::vector<double> g(o.points);
        for (int i = 0; i < o.points; ++i)
            g[i] = o.omega_min +
                   (o.omega_max - o.omega_min) * i / (o.points - 1);
        return g;
    }
    return susceptibility::default_omega_grid(p, o.points);
}

susceptibility::SpectralCurve chi_curve(const DotParams& p, const Options& o,
                                        const std::string& mdl) {
    const auto grid = make_grid(o, p);
    if (mdl == "ising") {
        return susceptibility::sample_curve(
            [&p](double w) { return susceptibility::ising_im_chi(w, p); },
            grid, p);
    }
    susceptibility::AnisoChi ev(p);
    auto c = susceptibility::sample_curve(
        [&ev](double w) { return ev(w); }, grid, p);
    c.raw_sign = ev.raw_sign();
    return c;
}

int run_chi(Options& o) {
    convert_inputs(o);
    const auto produce = [&](const DotParams& p, const std::string& path) {
        if (o.mdl == "lowt") {
            const int w = o.ncut > 0 ? o.ncut : partition::auto_low_t_window(p);
            emit_comb(susceptibility::low_t_delta_comb(p, w), o, path);
        } else if (o.mdl == "iso") {
            emit_comb(susceptibility::isotropic_comb(p, o.magnetization, o.field),
                      o, path);
        } else {
            emit_curve(chi_curve(p, o, o.mdl), o, path);
        }
    };
    if (o.sweep.empty()) {
        produce(o.p, o.out);
        return 0;
    }
    auto values = parse_range(o.range);
    for (double& v : values)
        if (param_is_energy(o.sweep)) v = to_internal(v, o);
    for (double v : values) {
        DotParams p = o.p;
        set_param(p, o.sweep, v);
        const double shown = param_is_energy(o.sweep) ? from_internal(v, o) : v;
        produce(p, sweep_path(o.out, o.sweep, shown, ext_of(o)));
    }
    return 0;
}

int run_qfi(Options& o) {
    convert_inputs(o);
    auto values = parse_range(o.range);
    for (double& v : values)
        if (param_is_energy(o.sweep)) v = to_internal(v, o);
    const auto conv = parse_convention(o.convention);
    const auto mode = parse_spin_mode(o.spin_mode);
    const auto par = parse_parity(o.parity);

    std::vector<double> out_y(values.size());
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(values.size()); ++i) {
        try {
            DotParams p = o.p;
            set_param(p, o.sweep, values[i]);
            qfi::QfiResult r;
            if (o.mdl == "ising") r = qfi::qfi_ising(p, conv);
            else if (o.mdl == "aniso") r = qfi::qfi_aniso(p, conv);
            else r = qfi::qfi_low_t_closed(p, mode, par, conv);
            out_y[i] = r.value;
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    emit::Table t;
    t.x_name = o.sweep;
    t.y_name = "qfi";
    for (double v : values)
        t.x.push_back(param_is_energy(o.sweep) ? from_internal(v, o) : v);
    t.y = out_y;
    t.params = o.p;
    t.regime = model::classify_regime(o.p);
    t.extra_meta.push_back("model=" + o.mdl);
    t.extra_meta.push_back("convention=" + o.convention);
    if (o.mdl == "lowt") t.extra_meta.push_back("spin_mode=" + o.spin_mode);
    if (o.format == "json")
        emit::write_file(o.out, emit::table_json(t).dump(2) + "\n");
    else
        emit::write_file(o.out, emit::table_csv(t));
    std::cout << o.out << "\n";
    return 0;
}

int run_figures(const std::string& which, const std::string& dir,
                Options& o) {
    std::filesystem::create_directories(dir);
    const auto want = [&](const std::string& f) {
        return which == "all" || which == f;
    };
    const std::string ext = ext_of(o);

    const std::vector<double> temps = {5, 10, 20, 40};
    const std::vector<double> jz_fig1 = {0.05, 0.1, 0.3, 0.5, 0.8};
    const std::vector<double> jz_fig3 = {0.2, 0.4, 0.6, 0.9};

    if (want("1")) {  // Ising Im chi vs omega
        for (double T : temps) {
            DotParams p{1, 0.1, 0, 0, 0, 0, T};
            emit_curve(chi_curve(p, o, "ising"), o,
                       dir + "/fig1_left_T=" + value_tag(T) + ext);
        }
        for (double jz : jz_fig1) {
            DotParams p{1, jz, 0, 0, 0, 0, 20};
            emit_curve(chi_curve(p, o, "ising"), o,
                       dir + "/fig1_right_jz=" + value_tag(jz) + ext);
        }
    }
    if (want("2")) {  // Ising QFI
        for (double jz : jz_fig1) {
            Options oo = o;
            oo.p = DotParams{1, jz, 0, 0, 0, 0, 20};
            oo.mdl = "ising";
            oo.sweep = "temp";
            oo.range = "5:50:19";
            oo.out = dir + "/fig2_left_jz=" + value_tag(jz) + ext;
            run_qfi(oo);
        }
        for (double T : temps) {
            Options oo = o;
            oo.p = DotParams{1, 0.1, 0, 0, 0, 0, T};
            oo.mdl = "ising";
            oo.sweep = "jz";
            oo.range = "0.05:0.9:18";
            oo.out = dir + "/fig2_right_T=" + value_tag(T) + ext;
            run_qfi(oo);
        }
    }
    if (want("3")) {  // anisotropic Im chi vs omega
        for (double T : temps) {
            DotParams p{1, 0.4, 0.98, 0, 0, 0, T};
            emit_curve(chi_curve(p, o, "aniso"), o,
                       dir + "/fig3_left_T=" + value_tag(T) + ext);
        }
        for (double jz : jz_fig3) {
            DotParams p{1, jz, 0.98, 0, 0, 0, 5};
            emit_curve(chi_curve(p, o, "aniso"), o,
                       dir + "/fig3_right_jz=" + value_tag(jz) + ext);
        }
    }
    if (want("4")) {  // anisotropic QFI
        for (double T : temps) {
            Options oo = o;
            oo.p = DotParams{1, 0.4, 0.98, 0, 0, 0, T};
            oo.mdl = "aniso";
            oo.sweep = "jz";
            oo.range = "0.05:0.95:19";
            oo.out = dir + "/fig4_left_T=" + value_tag(T) + ext;
            run_qfi(oo);
        }
        for (double jz : jz_fig3) {
            Options oo = o;
            oo.p = DotParams{1, jz, 0.98, 0, 0, 0, 5};
            oo.mdl = "aniso";
            oo.sweep = "temp";
            oo.range = "2:50:25";
            oo.out = dir + "/fig4_right_jz=" + value_tag(jz) + ext;
            run_qfi(oo);
        }
    }
    if (want("5")) {  // low-temperature QFI closed form
        for (double T : {0.01, 0.02, 0.05, 0.1}) {
            Options oo = o;
            oo.p = DotParams{1, 0.9, 0.5, 0, 0, 0, T};
            oo.mdl = "lowt";
            oo.sweep = "jperp";
            oo.range = "0.02:0.9:45";
            oo.out = dir + "/fig5_left_T=" + value_tag(T) + ext;
            run_qfi(oo);
        }
        for (double jp : {0.5, 0.6, 0.7, 0.8}) {
            Options oo = o;
            oo.p = DotParams{1, 0.9, jp, 0, 0, 0, 0.05};
            oo.mdl = "lowt";
            oo.sweep = "temp";
            oo.range = "0.005:0.3:30";
            oo.out = dir + "/fig5_right_jperp=" + value_tag(jp) + ext;
            run_qfi(oo);
        }
    }
    return 0;
}

int run_oracle(int levels, int seeds, double temperature, unsigned seed,
               const std::string& out) {
    std::mt19937 rng(seed);
    emit::Json models = emit::Json::array();
    bool all_pass = true;
    for (int s = 0; s < seeds; ++s) {
        const auto m = ed_oracle::random_model(levels, rng);
        const auto rep = ed_oracle::oracle_report(m, temperature);
        all_pass = all_pass && rep.all_pass;
        emit::Json e;
        e["index"] = s;
        emit::Json params;
        params["levels"] = m.levels;
        params["jz"] = m.jz;
        params["jperp"] = m.jperp;
        params["ec"] = m.ec;
        params["n0"] = m.n0;
        params["mu"] = m.mu;
        params["temperature"] = temperature;
        e["model"] = params;
        e["report"] = emit::oracle_json(rep);
        models.push_back(e);
    }
    emit::Json j;
    j["all_pass"] = all_pass;
    j["levels"] = levels;
    j["seeds"] = seeds;
    j["seed"] = seed;
    j["models"] = models;
    const std::string text = j.dump(2) + "\n";
    if (out.empty()) std::cout << text;
    else {
        emit::write_file(out, text);
        std::cout << out << "\n";
    }
    return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "qdot - dynamic transverse spin susceptibility and quantum Fisher "
        "information for metallic quantum dots"};
    app.require_subcommand(1);

    Options chi_o, qfi_o, fig_o;
    std::string fig_which = "all", fig_dir = "figures";
    int orc_levels = 3, orc_seeds = 20;
    double orc_temp = 0.5;
    unsigned orc_seed = 12345;
    std::string orc_out;
    double conv_value = 0.0;
    std::string conv_from = "mev", conv_to = "ghz";
    double conv_delta_mev = 1.0;

    auto* chi = app.add_subcommand("chi", "Im chi(omega) curves and delta combs");
    add_param_flags(chi, chi_o);
    add_output_flags(chi, chi_o, true);
    chi->add_option("--model", chi_o.mdl, "ising | aniso | lowt | iso")
        ->required()
        ->check(CLI::IsMember({"ising", "aniso", "lowt", "iso"}));
    chi->add_option("--omega-min", chi_o.omega_min, "Grid start");
    chi->add_option("--omega-max", chi_o.omega_max, "Grid end (default: automatic)");
    chi->add_option("--points", chi_o.points, "Grid points");
    chi->add_option("--sweep", chi_o.sweep, "Parameter to sweep");
    chi->add_option("--range", chi_o.range, "start:stop:n");
    chi->add_option("--ncut", chi_o.ncut, "Low-T charge window half-width (0 = auto)");
    chi->add_option("--magnetization", chi_o.magnetization, "Isotropic magnetization M");
    chi->add_option("--field", chi_o.field, "Isotropic field b");

    auto* qfic = app.add_subcommand("qfi", "QFI parameter sweeps");
    add_param_flags(qfic, qfi_o);
    add_output_flags(qfic, qfi_o, true);
    qfic->add_option("--model", qfi_o.mdl, "ising | aniso | lowt")
        ->required()
        ->check(CLI::IsMember({"ising", "aniso", "lowt"}));
    qfic->add_option("--sweep", qfi_o.sweep, "Parameter to sweep")->required();
    qfic->add_option("--range", qfi_o.range, "start:stop:n")->required();
    qfic->add_option("--convention", qfi_o.convention, "paper | hermitian")
        ->check(CLI::IsMember({"paper", "hermitian"}));
    qfic->add_option("--spin-mode", qfi_o.spin_mode, "continuous | discrete")
        ->check(CLI::IsMember({"continuous", "discrete"}));
    qfic->add_option("--parity", qfi_o.parity, "even | odd")
        ->check(CLI::IsMember({"even", "odd"}));

    auto* fig = app.add_subcommand("figures", "Reproduction presets (1-5)");
    fig->add_option("--which", fig_which, "1 | 2 | 3 | 4 | 5 | all")
        ->check(CLI::IsMember({"1", "2", "3", "4", "5", "all"}));
    fig->add_option("--out-dir", fig_dir, "Output directory");
    fig->add_option("--format", fig_o.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    fig->add_option("--points", fig_o.points, "Curve grid points");

    auto* orc = app.add_subcommand("oracle", "Exact-diagonalization identity checks");
    orc->add_option("--levels", orc_levels, "Orbital levels (1-8)")
        ->check(CLI::Range(1, ed_oracle::kMaxLevels));
    orc->add_option("--seeds", orc_seeds, "Number of random models")
        ->check(CLI::PositiveNumber);
    orc->add_option("--temp", orc_temp, "Temperature (units of delta)");
    orc->add_option("--seed", orc_seed, "RNG seed");
    orc->add_option("--out", orc_out, "Report path (default: stdout)");

    auto* cnv = app.add_subcommand("convert", "Energy unit conversion");
    cnv->add_option("value", conv_value, "Value to convert")->required();
    cnv->add_option("--from", conv_from, "delta | mev | ghz")
        ->check(CLI::IsMember({"delta", "mev", "ghz"}));
    cnv->add_option("--to", conv_to, "delta | mev | ghz")
        ->check(CLI::IsMember({"delta", "mev", "ghz"}));
    cnv->add_option("--delta-mev", conv_delta_mev, "Level spacing in meV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (chi->parsed()) return run_chi(chi_o);
        if (qfic->parsed()) return run_qfi(qfi_o);
        if (fig->parsed()) return run_figures(fig_which, fig_dir, fig_o);
        if (orc->parsed())
            return run_oracle(orc_levels, orc_seeds, orc_temp, orc_seed, orc_out);
        if (cnv->parsed()) {
            const double v = model::convert_units(
                conv_value, parse_unit(conv_from), parse_unit(conv_to),
                conv_delta_mev);
            std::cout << emit::fmt_double(v) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
