#pragma once

// File formats: SetSpec CSV (header dim,c0,c1,...; one sample per row, with a
// params sidecar JSON for parametric curves) and nodal-state CSV (t,u).
// Numbers are written with shortest round-trip formatting so identical data
// produces identical bytes.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "multimin/geometry.hpp"

namespace multimin {

inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string sidecar_path(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension();
    return p.string() + ".params.json";
}

inline void write_set_csv(const SetSpec& X, const std::string& path) {
    X.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_set_csv: cannot open " + path);
    const std::size_t dim = X.dimension();
    out << "dim";
    for (std::size_t d = 0; d < dim; ++d) out << ",c" << d;
    out << "\n";
    for (const Point& p : X.samples) {
        out << dim;
        for (double c : p) out << "," << format_double(c);
        out << "\n";
    }
    if (X.kind == SetKind::ParametricCurve) {
        nlohmann::ordered_json side;
        side["kind"] = "parametric";
        side["params"] = X.params;
        std::ofstream sout(sidecar_path(path));
        if (!sout) throw std::runtime_error("write_set_csv: cannot open sidecar for " + path);
        sout << side.dump(2) << "\n";
    }
}

inline SetSpec read_set_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_set_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_set_csv: empty file " + path);
    SetSpec X;
    X.provenance = "csv:" + path;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < 2) throw std::runtime_error("read_set_csv: malformed row in " + path);
        const std::size_t dim = static_cast<std::size_t>(row.front());
        if (row.size() != dim + 1) throw std::runtime_error("read_set_csv: row/dim mismatch in " + path);
        X.samples.emplace_back(row.begin() + 1, row.end());
    }
    const std::string side = sidecar_path(path);
    if (std::filesystem::exists(side)) {
        std::ifstream sin(side);
        nlohmann::json j;
        sin >> j;
        if (j.value("kind", "") == "parametric") {
            X.kind = SetKind::ParametricCurve;
            X.params = j.at("params").get<std::vector<double>>();
        }
    }
    X.validate();
    return X;
}

// Nodal dump t,u including the zero boundary rows.
inline void write_state_csv(const std::vector<double>& u, double h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_state_csv: cannot open " + path);
    out << "t,u\n";
    out << "0,0\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
        out << format_double(static_cast<double>(i + 1) * h) << "," << format_double(u[i]) << "\n";
    }
    out << "1,0\n";
}

}  // namespace multimin
