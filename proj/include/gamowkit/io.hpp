#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gamowkit/born.hpp"
#include "gamowkit/errors.hpp"
#include "gamowkit/hardy.hpp"
#include "gamowkit/jordan.hpp"
#include "gamowkit/smatrix.hpp"
#include "gamowkit/wavefunction.hpp"

namespace gamowkit::io {

using json = nlohmann::ordered_json;

// Serialized state operators / Hamiltonians are rejected above this
// dimension.
inline constexpr Eigen::Index kMaxOperatorDim = 4096;

// Fixed 17-significant-digit float formatting; all CSV output goes through
// here so reruns are byte-identical.
inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- complex & rational helpers ----

inline json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2) return Complex(j[0].get<double>(), j[1].get<double>());
    throw IoError("expected a number or [re, im] pair");
}

inline json rational_to_json(const RationalFunction& rf) {
    json num = json::array(), den = json::array();
    for (const auto& c : rf.num()) num.push_back(complex_to_json(c));
    for (const auto& c : rf.den()) den.push_back(complex_to_json(c));
    return json{{"num", num}, {"den", den}};
}

inline RationalFunction rational_from_json(const json& j) {
    std::vector<Complex> num, den;
    for (const auto& c : j.at("num")) num.push_back(complex_from_json(c));
    for (const auto& c : j.at("den")) den.push_back(complex_from_json(c));
    return RationalFunction(std::move(num), std::move(den));
}

// ---- wave functions ----

inline std::string wavefunction_to_csv(const WaveFunction& f) {
    std::ostringstream out;
    out << "E,re,im\n";
    for (std::size_t i = 0; i < f.size(); ++i)
        out << fmt(f.grid().point(i)) << ',' << fmt(f.samples()[i].real()) << ','
            << fmt(f.samples()[i].imag()) << '\n';
    return out.str();
}

// Grids are uniform in files; weights are recomputed on load.
inline WaveFunction wavefunction_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("E,re,im", 0) != 0)
        throw IoError("wave function CSV must start with header E,re,im");
    std::vector<double> e;
    std::vector<Complex> s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double a, b, c;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
            throw IoError("malformed wave function CSV row: " + line);
        e.push_back(a);
        s.push_back(Complex(b, c));
    }
    if (e.size() < 2) throw IoError("wave function CSV needs at least two rows");
    EnergyGrid grid = EnergyGrid::uniform(e.front(), e.back(), e.size());
    return WaveFunction(std::move(grid), std::move(s));
}

inline json wavefunction_to_json(const WaveFunction& f) {
    json j;
    j["grid"] = {{"e0", f.grid().e0()}, {"e_max", f.grid().e_max()}, {"n", f.grid().size()}};
    json samples = json::array();
    for (const auto& c : f.samples()) samples.push_back(complex_to_json(c));
    j["samples"] = std::move(samples);
    if (f.closed_form()) j["closed_form"] = rational_to_json(*f.closed_form());
    return j;
}

inline WaveFunction wavefunction_from_json(const json& j) {
    const auto& g = j.at("grid");
    EnergyGrid grid = EnergyGrid::uniform(g.at("e0").get<double>(), g.at("e_max").get<double>(),
                                          g.at("n").get<std::size_t>());
    std::vector<Complex> samples;
    for (const auto& c : j.at("samples")) samples.push_back(complex_from_json(c));
    std::optional<RationalFunction> rf;
    if (j.contains("closed_form")) rf = rational_from_json(j.at("closed_form"));
    return WaveFunction(std::move(grid), std::move(samples), std::move(rf));
}

// ---- S-matrix models ----

inline json model_to_json(const SMatrixModel& m) {
    json poles = json::array();
    for (const auto& p : m.poles())
        poles.push_back(json{{"e_r", p.e_r}, {"gamma", p.gamma}, {"order", p.order}});
    json j{{"poles", std::move(poles)}};
    if (m.background()) j["background"] = rational_to_json(*m.background());
    return j;
}

inline SMatrixModel model_from_json(const json& j) {
    std::vector<PoleSpec> poles;
    for (const auto& p : j.at("poles"))
        poles.emplace_back(p.at("e_r").get<double>(), p.at("gamma").get<double>(),
                           p.value("order", 1));
    std::optional<RationalFunction> bg;
    if (j.contains("background")) bg = rational_from_json(j.at("background"));
    return SMatrixModel(std::move(poles), std::move(bg));
}

inline SMatrixModel load_model(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("model JSON parse error in " + path + ": " + e.what());
    }
    return model_from_json(j);
}

// ---- composite bases and operators ----

inline json basis_to_json(const CompositeBasis& b) {
    json poles = json::array();
    for (const auto& p : b.poles())
        poles.push_back(json{{"e_r", p.e_r}, {"gamma", p.gamma}, {"order", p.order}});
    json j{{"poles", std::move(poles)}};
    if (b.grid())
        j["grid"] = {{"e0", b.grid()->e0()}, {"e_max", b.grid()->e_max()}, {"n", b.grid()->size()}};
    else
        j["grid"] = nullptr;
    return j;
}

inline CompositeBasis basis_from_json(const json& j) {
    std::vector<PoleSpec> poles;
    for (const auto& p : j.at("poles"))
        poles.emplace_back(p.at("e_r").get<double>(), p.at("gamma").get<double>(),
                           p.value("order", 1));
    std::optional<EnergyGrid> grid;
    if (j.contains("grid") && !j.at("grid").is_null()) {
        const auto& g = j.at("grid");
        grid = EnergyGrid::uniform(g.at("e0").get<double>(), g.at("e_max").get<double>(),
                                   g.at("n").get<std::size_t>());
    }
    return CompositeBasis(std::move(poles), std::move(grid));
}

inline json matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXcd matrix_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) throw IoError("matrix JSON is empty");
    if (rows > kMaxOperatorDim) throw IoError("matrix dimension exceeds the 4096 cap");
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    if (cols > kMaxOperatorDim) throw IoError("matrix dimension exceeds the 4096 cap");
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) throw IoError("ragged matrix JSON");
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = complex_from_json(row.at(static_cast<std::size_t>(k)));
    }
    return m;
}

inline json operator_to_json(const StateOperator& W) {
    return json{{"basis", basis_to_json(W.basis())}, {"matrix", matrix_to_json(W.matrix())}};
}

inline StateOperator operator_from_json(const json& j) {
    return StateOperator(basis_from_json(j.at("basis")), matrix_from_json(j.at("matrix")));
}

inline json hamiltonian_to_json(const HamiltonianMatrix& H) {
    return json{{"basis", basis_to_json(H.basis())}, {"matrix", matrix_to_json(H.data())}};
}

inline HamiltonianMatrix hamiltonian_from_json(const json& j) {
    return HamiltonianMatrix(basis_from_json(j.at("basis")), matrix_from_json(j.at("matrix")));
}

// ---- reports and curves ----

inline json hardy_report_to_json(const HardyReport& r, const std::string& name, HalfPlane hp) {
    return json{{"function", name},
                {"half_plane", to_string(hp)},
                {"is_hardy", r.is_hardy},
                {"titchmarsh_residual", r.titchmarsh_residual},
                {"wrong_side_leakage", r.wrong_side_leakage},
                {"tolerance_used", r.tolerance_used},
                {"decay_warning", r.decay_warning}};
}

inline std::string curve_to_csv(const DecayCurve& c) {
    std::ostringstream out;
    out << "t,P\n";
    for (std::size_t i = 0; i < c.times.size(); ++i)
        out << fmt(c.times[i]) << ',' << fmt(c.values[i]) << '\n';
    return out.str();
}

inline DecayCurve curve_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,P", 0) != 0)
        throw IoError("curve CSV must start with header t,P");
    DecayCurve c;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t, p;
        if (std::sscanf(line.c_str(), "%lf,%lf", &t, &p) != 2)
            throw IoError("malformed curve CSV row: " + line);
        c.times.push_back(t);
        c.values.push_back(p);
    }
    return c;
}

// Sidecar next to every curve: fit results plus the normalization statement
// (generalized-state rates are never renormalized).
inline json curve_sidecar(const DecayCurve& c, const json& tolerances = json::object()) {
    json j{{"gamma_fit", c.gamma_fit},
           {"fit_residual", c.fit_residual},
           {"window", json::array({c.window[0], c.window[1]})},
           {"renormalized", false}};
    if (c.gamma_fit != 0.0) j["tau"] = 1.0 / c.gamma_fit;
    j["tolerances"] = tolerances;
    return j;
}

// Per-point relative comparison against a stored golden curve.
inline bool matches_golden(const DecayCurve& c, const DecayCurve& golden, double rel_tol = 1e-8,
                           std::string* why = nullptr) {
    if (c.times.size() != golden.times.size()) {
        if (why) *why = "point count differs";
        return false;
    }
    for (std::size_t i = 0; i < c.times.size(); ++i) {
        const double scale = std::max(std::abs(golden.values[i]), 1e-300);
        if (std::abs(c.times[i] - golden.times[i]) > 1e-12 * std::max(1.0, std::abs(golden.times[i])) ||
            std::abs(c.values[i] - golden.values[i]) > rel_tol * scale) {
            if (why) *why = "mismatch at row " + std::to_string(i);
            return false;
        }
    }
    return true;
}

}  // namespace gamowkit::io
