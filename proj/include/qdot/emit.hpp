#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qdot/ed_oracle.hpp"
#include "qdot/model.hpp"
#include "qdot/susceptibility.hpp"

namespace qdot::emit {

using Json = nlohmann::ordered_json;

/// Shortest representation that round-trips a double (up to 17 significant
/// digits).
std::string fmt_double(double v);

Json params_json(const model::DotParams& p);
Json regime_json(const model::RegimeReport& r);

/// CSV: '#'-prefixed metadata lines (params, regime, warnings), then a column
/// header, then rows at full double precision. LF line endings, byte-stable.
std::string curve_csv(const susceptibility::SpectralCurve& c,
                      const std::string& y_name = "im_chi");
std::string comb_csv(const susceptibility::DeltaComb& c);

/// Rows of (x, y) with shared metadata, e.g. a QFI sweep.
struct Table {
    std::string x_name, y_name;
    std::vector<double> x, y;
    model::DotParams params;
    model::RegimeReport regime;
    std::vector<std::string> extra_meta;  // "key=value" strings
};
std::string table_csv(const Table& t);

Json curve_json(const susceptibility::SpectralCurve& c);
Json comb_json(const susceptibility::DeltaComb& c);
Json table_json(const Table& t);
Json oracle_json(const ed_oracle::OracleReport& r);

void write_file(const std::string& path, const std::string& content);

}  // namespace qdot::emit
