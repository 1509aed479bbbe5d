#include "qdot/emit.hpp"
#include <cmath>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qdot::emit {

std::string fmt_double(double v) {
    char buf[40];
    if (v == 0.0) return "0";
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    // Shortest representation that round-trips: try increasing precision.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

Json params_json(const model::DotParams& p) {
    Json j;
    j["delta"] = p.delta;
    j["jz"] = p.jz;
    j["jperp"] = p.jperp;
    j["ec"] = p.ec;
    j["n0"] = p.n0;
    j["mu"] = p.mu;
    j["temperature"] = p.temperature;
    return j;
}

Json regime_json(const model::RegimeReport& r) {
    Json j;
    j["phase"] = model::phase_name(r.phase);
    j["high_t_ising_valid"] = r.high_t_ising_valid;
    j["high_t_aniso_valid"] = r.high_t_aniso_valid;
    j["low_t_valid"] = r.low_t_valid;
    j["notes"] = r.notes;
    return j;
}

namespace {

void meta_lines(std::ostringstream& out, const model::DotParams& p,
                const model::RegimeReport& r,
                const std::vector<std::string>& extra) {
    out << "# delta=" << fmt_double(p.delta) << " jz=" << fmt_double(p.jz)
        << " jperp=" << fmt_double(p.jperp) << " ec=" << fmt_double(p.ec)
        << " n0=" << fmt_double(p.n0) << " mu=" << fmt_double(p.mu)
        << " temperature=" << fmt_double(p.temperature) << "\n";
    out << "# phase=" << model::phase_name(r.phase)
        << " high_t_ising_valid=" << (r.high_t_ising_valid ? 1 : 0)
        << " high_t_aniso_valid=" << (r.high_t_aniso_valid ? 1 : 0)
        << " low_t_valid=" << (r.low_t_valid ? 1 : 0) << "\n";
    for (const auto& e : extra) out << "# " << e << "\n";
}

}  // namespace

std::string curve_csv(const susceptibility::SpectralCurve& c,
                      const std::string& y_name) {
    std::ostringstream out;
    std::vector<std::string> extra;
    extra.push_back(std::string("raw_sign=") + (c.raw_sign >= 0 ? "+1" : "-1"));
    for (const auto& n : c.regime.notes) extra.push_back("warning: " + n);
    meta_lines(out, c.params, c.regime, extra);
    out << "omega," << y_name << "\n";
    for (std::size_t i = 0; i < c.omegas.size(); ++i)
        out << fmt_double(c.omegas[i]) << "," << fmt_double(c.values[i]) << "\n";
    return out.str();
}

std::string comb_csv(const susceptibility::DeltaComb& c) {
    std::ostringstream out;
    std::vector<std::string> extra;
    for (const auto& n : c.notes) extra.push_back("note: " + n);
    for (const auto& n : c.regime.notes) extra.push_back("warning: " + n);
    meta_lines(out, c.params, c.regime, extra);
    out << "omega,weight\n";
    for (const auto& pk : c.peaks)
        out << fmt_double(pk.omega) << "," << fmt_double(pk.weight) << "\n";
    return out.str();
}

std::string table_csv(const Table& t) {
    std::ostringstream out;
    meta_lines(out, t.params, t.regime, t.extra_meta);
    out << t.x_name << "," << t.y_name << "\n";
    for (std::size_t i = 0; i < t.x.size(); ++i)
        out << fmt_double(t.x[i]) << "," << fmt_double(t.y[i]) << "\n";
    return out.str();
}

Json curve_json(const susceptibility::SpectralCurve& c) {
    Json j;
    j["params"] = params_json(c.params);
    j["regime"] = regime_json(c.regime);
    j["raw_sign"] = c.raw_sign;
    Json data;
    data["x"] = c.omegas;
    data["y"] = c.values;
    j["data"] = data;
    return j;
}

Json comb_json(const susceptibility::DeltaComb& c) {
    Json j;
    j["params"] = params_json(c.params);
    j["regime"] = regime_json(c.regime);
    if (!c.notes.empty()) j["notes"] = c.notes;
    Json peaks = Json::array();
    for (const auto& pk : c.peaks) {
        Json e;
        e["omega"] = pk.omega;
        e["weight"] = pk.weight;
        peaks.push_back(e);
    }
    j["peaks"] = peaks;
    return j;
}

Json table_json(const Table& t) {
    Json j;
    j["params"] = params_json(t.params);
    j["regime"] = regime_json(t.regime);
    for (const auto& kv : t.extra_meta) {
        const auto pos = kv.find('=');
        if (pos != std::string::npos)
            j[kv.substr(0, pos)] = kv.substr(pos + 1);
    }
    Json data;
    data["x"] = t.x;
    data["y"] = t.y;
    data["x_name"] = t.x_name;
    data["y_name"] = t.y_name;
    j["data"] = data;
    return j;
}

Json oracle_json(const ed_oracle::OracleReport& r) {
    Json j;
    j["all_pass"] = r.all_pass;
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json e;
        e["name"] = c.name;
        e["pass"] = c.pass;
        e["residual"] = c.residual;
        if (!c.detail.empty()) e["detail"] = c.detail;
        checks.push_back(e);
    }
    j["checks"] = checks;
    return j;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f << content;
    if (!f) throw Error("write failed: " + path);
}

}  // namespace qdot::emit
