// gamowkit command-line front end: Hardy checks, decay curves, Jordan-block
// demos, unitary-vs-semigroup comparisons, raw operator sweeps.
//
// Exit codes: 0 success, 1 numerical-contract failure, 2 configuration error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gamowkit/gamowkit.hpp"

namespace fs = std::filesystem;
using namespace gamowkit;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

struct GlobalOpts {
    std::string model_path;
    std::string config_path;
    std::string out_dir = ".";
    std::string times_spec;
    std::string golden_path;
    double tol = kDefaultHardyTol;
    bool tol_set = false;
};

json load_config(const GlobalOpts& g) {
    if (g.config_path.empty()) return json::object();
    json j;
    try {
        j = json::parse(io::read_file(g.config_path));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return j;
}

// flags win over config
std::string effective_model(const GlobalOpts& g, const json& cfg) {
    if (!g.model_path.empty()) return g.model_path;
    if (cfg.contains("model")) return cfg["model"].get<std::string>();
    throw ConfigError("no model given (use --model or config)");
}

std::vector<double> parse_times(const std::string& spec) {
    double t0 = 0, t1 = 0;
    long n = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%ld", &t0, &t1, &n) != 3 || n < 1 || n > 10000000)
        throw ConfigError("--times expects t0:t1:n with 1 <= n <= 1e7");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            n == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

std::vector<double> effective_times(const GlobalOpts& g, const json& cfg,
                                    const std::string& fallback) {
    if (!g.times_spec.empty()) return parse_times(g.times_spec);
    if (cfg.contains("times")) {
        const auto& t = cfg["times"];
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%.17g:%.17g:%ld", t.at("t0").get<double>(),
                      t.at("t1").get<double>(), t.at("n").get<long>());
        return parse_times(buf);
    }
    return parse_times(fallback);
}

double effective_tol(const GlobalOpts& g, const json& cfg) {
    double tol = kDefaultHardyTol;
    if (cfg.contains("tol") && cfg["tol"].contains("hardy"))
        tol = cfg["tol"]["hardy"].get<double>();
    if (g.tol_set) tol = g.tol;
    if (!(tol > 0.0)) throw ConfigError("tolerances must be positive");
    return tol;
}

EnergyGrid effective_grid(const GlobalOpts&, const json& cfg, const SMatrixModel& model) {
    if (cfg.contains("grid")) {
        const auto& gj = cfg["grid"];
        return EnergyGrid::uniform(gj.at("e0").get<double>(), gj.at("e_max").get<double>(),
                                   gj.at("n").get<std::size_t>());
    }
    if (model.poles().empty()) throw ConfigError("no grid given and no pole to derive one from");
    const PoleSpec& p = model.poles().front();
    return EnergyGrid::uniform(p.e_r - 80.0 * p.gamma, p.e_r + 80.0 * p.gamma, 4096);
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir);
}

WaveFunction wavefunction_from_spec(const json& spec, const EnergyGrid& grid) {
    if (spec.contains("file")) {
        const std::string path = spec["file"].get<std::string>();
        const std::string text = io::read_file(path);
        if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
            return io::wavefunction_from_csv(text);
        return io::wavefunction_from_json(json::parse(text));
    }
    if (spec.contains("rational"))
        return WaveFunction::from_closed_form(grid, io::rational_from_json(spec["rational"]));
    throw ConfigError("wavefunction spec needs either \"file\" or \"rational\"");
}

int run_check_hardy(const GlobalOpts& g) {
    const json cfg = load_config(g);
    const double tol = effective_tol(g, cfg);
    if (!cfg.contains("wavefunctions") || cfg["wavefunctions"].empty()) {
        std::cerr << "check-hardy: no inputs (config lists no wavefunctions)\n";
        return kExitConfig;
    }
    if (!cfg.contains("grid")) {
        std::cerr << "check-hardy: config must provide a grid\n";
        return kExitConfig;
    }
    const auto& gj = cfg["grid"];
    const EnergyGrid grid = EnergyGrid::uniform(gj.at("e0").get<double>(),
                                                gj.at("e_max").get<double>(),
                                                gj.at("n").get<std::size_t>());
    ensure_out_dir(g.out_dir);
    bool all_ok = true;
    for (const auto& spec : cfg["wavefunctions"]) {
        const std::string name = spec.value("name", std::string("wf"));
        const WaveFunction f = wavefunction_from_spec(spec, grid);
        HardyReport reports[2];
        const HalfPlane planes[2] = {HalfPlane::upper, HalfPlane::lower};
        for (int i = 0; i < 2; ++i) {
            reports[i] = hardy_membership(f, planes[i], tol);
            const json rj = io::hardy_report_to_json(reports[i], name, planes[i]);
            io::write_file(g.out_dir + "/hardy_report_" + name + "_" + to_string(planes[i]) + ".json",
                           rj.dump(2) + "\n");
        }
        if (spec.contains("expect")) {
            const std::string expect = spec["expect"].get<std::string>();
            if (expect != "upper" && expect != "lower") {
                std::cerr << "check-hardy: expect must be \"upper\" or \"lower\"\n";
                return kExitConfig;
            }
            const int want = expect == "upper" ? 0 : 1;
            const bool ok = reports[want].is_hardy && !reports[1 - want].is_hardy;
            std::cout << name << ": expected " << expect << " -> " << (ok ? "ok" : "FAIL") << "\n";
            all_ok = all_ok && ok;
        }
    }
    return all_ok ? kExitOk : kExitNumerical;
}

DecayCurve decay_curve_for_model(const SMatrixModel& model, const EnergyGrid& grid,
                                 const json& cfg, const std::vector<double>& times, double tol,
                                 bool zeroth_order_only) {
    PoleSpec pole = model.poles().front();
    // "gamow" restricts to the zeroth-order dyad, i.e. the order-1 pole term
    if (zeroth_order_only) pole = PoleSpec(pole.e_r, pole.gamma, 1);
    WaveFunction psi = cfg.contains("wavefunctions") && !cfg["wavefunctions"].empty()
                           ? wavefunction_from_spec(cfg["wavefunctions"][0], grid)
                           : gamow_wavefunction(pole, grid);
    return gamow_decay_curve(psi, pole, times, tol);
}

int run_decay(const GlobalOpts& g, const std::string& operator_name) {
    const json cfg = load_config(g);
    const SMatrixModel model = io::load_model(effective_model(g, cfg));
    if (model.poles().empty()) {
        std::cerr << "decay: model has no poles\n";
        return kExitConfig;
    }
    const PoleSpec& pole = model.poles().front();
    std::vector<double> times = effective_times(g, cfg, "0:5:51");
    for (double t : times)
        if (t < 0.0) {
            std::cerr << "decay: negative time in sweep; the semigroup evolution is defined "
                         "for t >= 0 only\n";
            return kExitConfig;
        }
    if (operator_name != "W_PT" && operator_name != "gamow") {
        std::cerr << "decay: unknown --operator (use W_PT or gamow)\n";
        return kExitConfig;
    }
    const double tol = effective_tol(g, cfg);
    const EnergyGrid grid = effective_grid(g, cfg, model);
    ensure_out_dir(g.out_dir);
    const DecayCurve curve =
        decay_curve_for_model(model, grid, cfg, times, tol, operator_name == "gamow");
    io::write_file(g.out_dir + "/decay.csv", io::curve_to_csv(curve));
    io::write_file(g.out_dir + "/decay_fit.json",
                   io::curve_sidecar(curve, json{{"hardy", tol}}).dump(2) + "\n");
    std::printf("gamma_fit = %.17g\n", curve.gamma_fit);
    std::printf("tau = %.17g\n", 1.0 / curve.gamma_fit);
    if (!g.golden_path.empty()) {
        const DecayCurve golden = io::curve_from_csv(io::read_file(g.golden_path));
        std::string why;
        if (!io::matches_golden(curve, golden, 1e-8, &why)) {
            std::cerr << "decay: golden comparison failed: " << why << "\n";
            return kExitNumerical;
        }
    }
    if (std::abs(curve.gamma_fit - pole.gamma) > 1e-10 * pole.gamma) {
        std::cerr << "decay: fitted width deviates from the pole width beyond contract\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int run_jordan_demo(const GlobalOpts& g) {
    const json cfg = load_config(g);
    const SMatrixModel model = io::load_model(effective_model(g, cfg));
    const PoleSpec* pole = nullptr;
    for (const auto& p : model.poles())
        if (p.order >= 2 && !pole) pole = &p;
    if (!pole) {
        std::cerr << "jordan-demo: demo requires a pole of order r >= 2\n";
        return kExitConfig;
    }
    const std::vector<double> times = effective_times(g, cfg, "0:5:11");
    for (double t : times)
        if (t < 0.0) {
            std::cerr << "jordan-demo: negative time in sweep\n";
            return kExitConfig;
        }
    ensure_out_dir(g.out_dir);

    const CompositeBasis basis(model.poles());
    const HamiltonianMatrix H = assemble_hamiltonian(basis);
    io::write_file(g.out_dir + "/hamiltonian.json", io::hamiltonian_to_json(H).dump(2) + "\n");

    const int r = pole->order;
    const CompositeBasis block({*pole});
    const HamiltonianMatrix Hb = assemble_hamiltonian(block);
    const Eigen::MatrixXcd B = Hb.ket_block(0);

    bool ok = true;
    std::ostringstream a13;
    a13 << "t,k,residual\n";
    double worst_a13 = 0.0;
    for (double t : times) {
        const Eigen::MatrixXcd U = expm(Complex(0.0, -t) * B);
        for (int k = 0; k < r; ++k) {
            Eigen::VectorXcd c = Eigen::VectorXcd::Zero(r);
            c(k) = Complex(1.0, 0.0);
            const JordanKetCoeffs evolved = evolve_jordan_ket(JordanKetCoeffs(*pole, c), t);
            const double resid = (evolved.coeffs - U * c).norm();
            worst_a13 = std::max(worst_a13, resid);
            a13 << io::fmt(t) << ',' << k << ',' << io::fmt(resid) << '\n';
        }
    }
    io::write_file(g.out_dir + "/a13_residuals.csv", a13.str());
    ok = ok && worst_a13 <= 1e-12;

    std::ostringstream law;
    law << "t,n,residual\n";
    double worst_law = 0.0;
    for (double t : times) {
        for (int n = 0; n < r; ++n) {
            const StateOperator W = build_W_n(*pole, n);
            const StateOperator Wt = evolve_state_operator(W, Hb, t);
            const double resid =
                (Wt.matrix() - std::exp(-pole->gamma * t) * W.matrix()).norm() / W.matrix().norm();
            worst_law = std::max(worst_law, resid);
            law << io::fmt(t) << ',' << n << ',' << io::fmt(resid) << '\n';
        }
    }
    io::write_file(g.out_dir + "/wn_law_residuals.csv", law.str());
    ok = ok && worst_law <= 1e-12;

    // generic dyad on the block: the exponential law must fail
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(r, r);
    D(1, 1) = Complex(1.0, 0.0);
    const StateOperator dy(block, D);
    std::ostringstream neg;
    neg << "t,residual\n";
    const double tref = 1.0 / pole->gamma;
    double resid_ref = 0.0;
    for (double t : times) {
        const StateOperator Wt = evolve_state_operator(dy, Hb, t);
        const double resid = (Wt.matrix() - std::exp(-pole->gamma * t) * D).norm() / D.norm();
        neg << io::fmt(t) << ',' << io::fmt(resid) << '\n';
    }
    {
        const StateOperator Wt = evolve_state_operator(dy, Hb, tref);
        resid_ref = (Wt.matrix() - std::exp(-pole->gamma * tref) * D).norm() / D.norm();
    }
    io::write_file(g.out_dir + "/negative_control.csv", neg.str());
    ok = ok && resid_ref >= 0.1;

    std::printf("a13_max_residual = %.17g\n", worst_a13);
    std::printf("wn_law_max_residual = %.17g\n", worst_law);
    std::printf("negative_control_residual_at_1_over_gamma = %.17g\n", resid_ref);
    return ok ? kExitOk : kExitNumerical;
}

int run_compare_unitary(const GlobalOpts& g, const std::string& mode) {
    const json cfg = load_config(g);
    const SMatrixModel model = io::load_model(effective_model(g, cfg));
    if (model.poles().empty()) {
        std::cerr << "compare-unitary: model has no poles\n";
        return kExitConfig;
    }
    const PoleSpec& pole = model.poles().front();
    json cfg_grid = cfg;
    if (!cfg_grid.contains("grid")) {
        cfg_grid["grid"] = {{"e0", 0.0}, {"e_max", 100.0 * pole.gamma}, {"n", 8192}};
    }
    const EnergyGrid grid = effective_grid(g, cfg_grid, model);
    const std::vector<double> times = effective_times(g, cfg, "0:30:301");
    const bool unitary = mode == "unitary";
    for (double t : times)
        if (t < 0.0 && !unitary) {
            std::cerr << "compare-unitary: negative time with --mode semigroup; the semigroup "
                         "is defined for t >= 0 only\n";
            return kExitConfig;
        }
    if (pole.gamma < 5.0 * grid.spacing()) {
        std::cerr << "compare-unitary: grid too coarse for the requested pole "
                     "(need gamma >= 5 grid spacings; increase n or shrink the window)\n";
        return kExitNumerical;
    }
    ensure_out_dir(g.out_dir);

    const WaveFunction phi = gamow_wavefunction(pole, grid).normalized();
    const DecayCurve hilbert = hilbert_survival_curve(phi, times, unitary);

    DecayCurve gamow;
    gamow.times = times;
    gamow.values.resize(times.size());
    const StateOperator W0 = build_W_PT(pole);
    const HamiltonianMatrix Hb = assemble_hamiltonian(W0.basis());
    const double norm0 = W0.matrix().norm();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = std::abs(times[i]);
        gamow.values[i] = evolve_state_operator(W0, Hb, t).matrix().norm() / norm0;
    }
    const auto window = std::array<double, 2>{0.5 / pole.gamma, 5.0 / pole.gamma};
    const auto hfit = fit_gamma(hilbert.times, hilbert.values, window);
    DecayCurve hilbert_out = hilbert;
    hilbert_out.gamma_fit = hfit[0];
    hilbert_out.fit_residual = hfit[1];
    hilbert_out.window = window;

    io::write_file(g.out_dir + "/survival_hilbert.csv", io::curve_to_csv(hilbert_out));
    io::write_file(g.out_dir + "/decay_semigroup.csv", io::curve_to_csv(gamow));

    // first time from which the Hilbert-space curve stays above the
    // semigroup exponential
    double crossover = times.empty() ? 0.0 : times.back();
    for (std::size_t i = times.size(); i-- > 0;) {
        if (hilbert.values[i] <= gamow.values[i]) {
            crossover = (i + 1 < times.size()) ? times[i + 1] : times.back();
            break;
        }
        crossover = times[i];
    }
    const double excess = hilbert.values.back() / std::max(gamow.values.back(), 1e-300);
    const json summary{{"gamma_fit_short_time", hfit[0]},
                       {"fit_window", json::array({window[0], window[1]})},
                       {"crossover_time", crossover},
                       {"excess_ratio_at_last_time", excess}};
    io::write_file(g.out_dir + "/compare_summary.json", summary.dump(2) + "\n");
    std::printf("gamma_fit_short_time = %.17g\n", hfit[0]);
    std::printf("crossover_time = %.17g\n", crossover);
    std::printf("excess_ratio_at_last_time = %.17g\n", excess);
    return kExitOk;
}

int run_evolve(const GlobalOpts& g, const std::string& operator_name) {
    const json cfg = load_config(g);
    const SMatrixModel model = io::load_model(effective_model(g, cfg));
    if (model.poles().empty()) {
        std::cerr << "evolve: model has no poles\n";
        return kExitConfig;
    }
    const PoleSpec& pole = model.poles().front();
    const std::vector<double> times = effective_times(g, cfg, "0:5:11");
    for (double t : times)
        if (t < 0.0) {
            std::cerr << "evolve: negative time in sweep\n";
            return kExitConfig;
        }
    StateOperator W0 = build_W_PT(pole);
    if (operator_name.rfind("W", 0) == 0 && operator_name != "W_PT") {
        const int n = std::atoi(operator_name.c_str() + 1);
        if (n < 0 || n >= pole.order) {
            std::cerr << "evolve: operator index out of range for the pole order\n";
            return kExitConfig;
        }
        W0 = build_W_n(pole, n);
    } else if (operator_name != "W_PT") {
        std::cerr << "evolve: unknown --operator (use W_PT or W<n>)\n";
        return kExitConfig;
    }
    const HamiltonianMatrix H = assemble_hamiltonian(W0.basis());
    ensure_out_dir(g.out_dir);
    std::ostringstream out;
    out << "t";
    const int r = pole.order;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) out << ",re_" << i << j << ",im_" << i << j;
    out << "\n";
    for (double t : times) {
        const StateOperator Wt = evolve_state_operator(W0, H, t);
        out << io::fmt(t);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                out << ',' << io::fmt(Wt.matrix()(i, j).real()) << ','
                    << io::fmt(Wt.matrix()(i, j).imag());
        out << "\n";
    }
    io::write_file(g.out_dir + "/evolve.csv", out.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gamowkit: resonances, Gamow-Jordan states and causal semigroup evolution"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--model", g.model_path, "S-matrix model JSON");
    app.add_option("--config", g.config_path, "run configuration JSON (flags win over config)");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--times", g.times_spec, "time sweep t0:t1:n");
    app.add_option("--golden", g.golden_path, "golden curve CSV to compare against");
    auto* tol_opt = app.add_option("--tol", g.tol, "hardy tolerance override");

    auto* check = app.add_subcommand("check-hardy", "half-plane membership reports");
    auto* decay = app.add_subcommand("decay", "semigroup decay curve and width fit");
    std::string decay_operator = "W_PT";
    decay->add_option("--operator", decay_operator, "W_PT (default) or gamow");
    auto* demo = app.add_subcommand("jordan-demo", "block matrix and evolution residual tables");
    auto* compare = app.add_subcommand("compare-unitary", "Hilbert-space vs semigroup decay");
    std::string compare_mode = "semigroup";
    compare->add_option("--mode", compare_mode, "semigroup (default) or unitary");
    auto* evolve = app.add_subcommand("evolve", "raw operator sweep to CSV");
    std::string evolve_operator = "W_PT";
    evolve->add_option("--operator", evolve_operator, "W_PT (default) or W<n>");

    // global flags may follow the subcommand name
    for (auto* sub : {check, decay, demo, compare, evolve}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    g.tol_set = tol_opt->count() > 0;
    if (g.tol_set && !(g.tol > 0.0)) {
        std::cerr << "invalid --tol: must be positive\n";
        return kExitConfig;
    }

    try {
        if (check->parsed()) return run_check_hardy(g);
        if (decay->parsed()) return run_decay(g, decay_operator);
        if (demo->parsed()) return run_jordan_demo(g);
        if (compare->parsed()) return run_compare_unitary(g, compare_mode);
        if (evolve->parsed()) return run_evolve(g, evolve_operator);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CausalityError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
