#include "wqed/driver.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "wqed/open_system.hpp"
#include "wqed/resonances.hpp"
#include "wqed/scattering.hpp"

namespace wqed {

namespace {

using nlohmann::json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

const char* to_string(WindowLabel label) {
    switch (label) {
        case WindowLabel::EIT: return "EIT";
        case WindowLabel::ATS: return "ATS";
        default: return "Ambiguous";
    }
}

RunMode parse_mode(const std::string& s) {
    if (s == "spectrum") return RunMode::Spectrum;
    if (s == "modes") return RunMode::Modes;
    if (s == "poles") return RunMode::Poles;
    if (s == "lindblad") return RunMode::Lindblad;
    if (s == "darkstate") return RunMode::DarkState;
    throw ConfigError("mode: unrecognized value '" + s + "'");
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError("output.format: unrecognized value '" + s + "'");
}

std::vector<double> require_doubles(const json& j, const std::string& path) {
    if (!j.is_array())
        throw ConfigError(path + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(path + ": expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

const char* to_string(RunMode mode) {
    switch (mode) {
        case RunMode::Spectrum: return "spectrum";
        case RunMode::Modes: return "modes";
        case RunMode::Poles: return "poles";
        case RunMode::Lindblad: return "lindblad";
        default: return "darkstate";
    }
}

RunConfig parse_config(const std::string& text,
                       std::vector<std::string>* warnings) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("document: not valid JSON: ") +
                          e.what());
    }
    if (!doc.is_object()) throw ConfigError("document: expected an object");

    RunConfig rc;
    if (!doc.contains("n_atoms") || !doc["n_atoms"].is_number_integer())
        throw ConfigError("n_atoms: required integer");
    rc.array.n_atoms = doc["n_atoms"].get<int>();
    if (rc.array.n_atoms < 1) throw ConfigError("n_atoms: must be positive");

    if (!doc.contains("delta_omega"))
        throw ConfigError("delta_omega: required");
    rc.array.delta_omega = require_doubles(doc["delta_omega"], "delta_omega");
    if (static_cast<int>(rc.array.delta_omega.size()) != rc.array.n_atoms)
        throw ConfigError("delta_omega: length must equal n_atoms");

    double mean = 0.0;
    for (double w : rc.array.delta_omega) mean += w;
    mean /= rc.array.n_atoms;
    if (std::abs(mean) > 1e-9) {
        if (warnings)
            warnings->push_back("delta_omega: mean " + fmt(mean) +
                                " removed (detunings are relative to the "
                                "average frequency)");
        for (double& w : rc.array.delta_omega) w -= mean;
    }

    if (doc.contains("gamma")) {
        rc.array.gamma = require_doubles(doc["gamma"], "gamma");
        if (static_cast<int>(rc.array.gamma.size()) != rc.array.n_atoms)
            throw ConfigError("gamma: length must equal n_atoms");
    } else {
        rc.array.gamma.assign(rc.array.n_atoms, 1.0);
    }

    if (doc.contains("phase")) {
        rc.array.phase = require_doubles(doc["phase"], "phase");
        if (static_cast<int>(rc.array.phase.size()) != rc.array.n_atoms)
            throw ConfigError("phase: length must equal n_atoms");
        if (doc.contains("spacing_multiple"))
            rc.array.spacing_multiple =
                doc["spacing_multiple"].get<int>();
    } else {
        const int sm = doc.value("spacing_multiple", 1);
        if (sm < 1) throw ConfigError("spacing_multiple: must be positive");
        rc.array.spacing_multiple = sm;
        rc.array.phase.resize(rc.array.n_atoms);
        for (int i = 0; i < rc.array.n_atoms; ++i)
            rc.array.phase[i] = i * sm * std::numbers::pi;
    }

    try {
        rc.array.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("array: ") + e.what());
    }

    if (doc.contains("mode")) {
        if (!doc["mode"].is_string())
            throw ConfigError("mode: expected a string");
        rc.mode = parse_mode(doc["mode"].get<std::string>());
    }

    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        if (!g.is_object()) throw ConfigError("grid: expected an object");
        rc.grid.min = g.value("min", rc.grid.min);
        rc.grid.max = g.value("max", rc.grid.max);
        rc.grid.points = g.value("points", rc.grid.points);
        if (rc.grid.points < 1) throw ConfigError("grid.points: must be >= 1");
        if (rc.grid.points > 1 && rc.grid.max <= rc.grid.min)
            throw ConfigError("grid: max must exceed min");
    }

    if (doc.contains("drive")) {
        const auto& d = doc["drive"];
        if (!d.is_object()) throw ConfigError("drive: expected an object");
        rc.drive.alpha2 = d.value("alpha2", rc.drive.alpha2);
        rc.drive.phase = d.value("phase", rc.drive.phase);
        if (rc.drive.alpha2 < 0.0)
            throw ConfigError("drive.alpha2: must be nonnegative");
    }

    if (doc.contains("output")) {
        const auto& o = doc["output"];
        if (!o.is_object()) throw ConfigError("output: expected an object");
        rc.output.path = o.value("path", rc.output.path);
        if (o.contains("format"))
            rc.output.format = parse_format(o["format"].get<std::string>());
    }
    return rc;
}

std::string emit_config(const RunConfig& rc) {
    json doc;
    doc["n_atoms"] = rc.array.n_atoms;
    doc["delta_omega"] = rc.array.delta_omega;
    doc["gamma"] = rc.array.gamma;
    doc["phase"] = rc.array.phase;
    if (rc.array.spacing_multiple)
        doc["spacing_multiple"] = *rc.array.spacing_multiple;
    doc["mode"] = to_string(rc.mode);
    doc["grid"] = {{"min", rc.grid.min},
                   {"max", rc.grid.max},
                   {"points", rc.grid.points}};
    doc["drive"] = {{"alpha2", rc.drive.alpha2}, {"phase", rc.drive.phase}};
    doc["output"] = {
        {"path", rc.output.path},
        {"format", rc.output.format == OutputFormat::Csv ? "csv" : "json"}};
    return doc.dump();
}

namespace {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, json>> scalars;  // header metadata
};

void write_output(const RunConfig& rc, const Table& table,
                  const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + path);

    if (rc.output.format == OutputFormat::Csv) {
        out << "# wqed " << "0.1.0" << "\n";
        out << "# config: " << emit_config(rc) << "\n";
        for (const auto& [key, value] : table.scalars)
            out << "# " << key << ": " << value.dump() << "\n";
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            out << (c ? "," : "") << table.columns[c];
        out << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << (c ? "," : "") << fmt(row[c]);
            out << "\n";
        }
    } else {
        json doc;
        doc["version"] = "0.1.0";
        doc["config"] = json::parse(emit_config(rc));
        for (const auto& [key, value] : table.scalars) doc[key] = value;
        doc["columns"] = table.columns;
        json rows = json::array();
        for (const auto& row : table.rows) {
            json r = json::array();
            for (double v : row) r.push_back(json::parse(fmt(v)));
            rows.push_back(std::move(r));
        }
        doc["rows"] = std::move(rows);
        out << doc.dump(2) << "\n";
    }
    if (!out.good()) throw std::runtime_error("write failed for " + path);
}

Table run_spectrum(const RunConfig& rc) {
    Table t;
    t.columns = {"delta_k", "t_re", "t_im", "r_re", "r_im", "T", "R"};
    const auto grid = linspace(rc.grid.min, rc.grid.max, rc.grid.points);
    const SpectrumSweep sw = sweep(rc.array, grid);
    for (const auto& res : sw.results)
        t.rows.push_back({res.delta_k, res.t.real(), res.t.imag(),
                          res.r.real(), res.r.imag(), res.transmittance,
                          res.reflectance});
    return t;
}

Table run_modes(const RunConfig& rc) {
    Table t;
    t.columns = {"i", "delta_i", "g_abs", "g_arg"};
    const CollectiveDecomposition dec = decompose(rc.array);
    const DegenerateReduction red = reduce_degenerate(rc.array);
    t.scalars.emplace_back("superradiant_decay", dec.superradiant_decay);
    t.scalars.emplace_back("window_count", red.window_count);
    for (std::size_t i = 0; i < dec.effective_detunings.size(); ++i)
        t.rows.push_back({static_cast<double>(i + 1),
                          dec.effective_detunings[i],
                          std::abs(dec.effective_couplings[i]),
                          std::arg(dec.effective_couplings[i])});
    return t;
}

Table run_poles(const RunConfig& rc) {
    Table t;
    t.columns = {"z_re", "z_im", "a_re", "a_im"};
    PoleSet ps = partial_fractions(rc.array);
    if (ps.poles.size() >= 2) ps.windows = classify_windows(ps);
    for (std::size_t i = 0; i < ps.poles.size(); ++i)
        t.rows.push_back({ps.poles[i].real(), ps.poles[i].imag(),
                          ps.residues[i].real(), ps.residues[i].imag()});
    json windows = json::array();
    for (const auto& w : ps.windows)
        windows.push_back({{"center", w.center}, {"label", to_string(w.label)}});
    t.scalars.emplace_back("windows", std::move(windows));
    t.scalars.emplace_back("ill_conditioned", ps.ill_conditioned);
    return t;
}

// Worker count for per-grid-point solves: WQED_THREADS, else the hardware
// concurrency, clamped to the grid size.
int thread_count(std::size_t work_items) {
    int n = 0;
    if (const char* env = std::getenv("WQED_THREADS")) n = std::atoi(env);
    if (n < 1) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    return static_cast<int>(
        std::min<std::size_t>(n, std::max<std::size_t>(work_items, 1)));
}

Table run_lindblad(const RunConfig& rc) {
    Table t;
    t.columns = {"delta_k", "T", "R", "F_over_alpha2"};
    const double alpha2 = rc.drive.alpha2;
    const Complex alpha = std::sqrt(alpha2) *
                          std::exp(Complex{0.0, rc.drive.phase});
    const auto grid = linspace(rc.grid.min, rc.grid.max, rc.grid.points);
    t.rows.resize(grid.size());

    const int workers = thread_count(grid.size());
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto solve_stripe = [&](int stripe) {
        for (std::size_t i = stripe; i < grid.size(); i += workers) {
            try {
                const SteadyStateResult res =
                    solve_steady(DriveConfig{rc.array, grid[i], alpha});
                t.rows[i] = {grid[i], res.transmittance, res.reflectance,
                             res.inelastic_flux / alpha2};
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (workers == 1) {
        solve_stripe(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(solve_stripe, w);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return t;
}

Table run_darkstate(const RunConfig& rc) {
    const int n = rc.array.n_atoms;
    if (n != 2 && n != 4)
        throw ConfigError("darkstate: supported for 2 or 4 atoms only");

    // Ladder spacing from the sorted detunings.
    std::vector<double> sorted = rc.array.delta_omega;
    std::sort(sorted.begin(), sorted.end());
    const double delta = sorted[1] - sorted[0];
    for (int i = 2; i < n; ++i)
        if (std::abs(sorted[i] - sorted[i - 1] - delta) > 1e-9)
            throw ConfigError(
                "darkstate: detunings must form an equally spaced ladder");

    const Complex alpha = std::sqrt(rc.drive.alpha2) *
                          std::exp(Complex{0.0, rc.drive.phase});
    const double omega = std::sqrt(rc.array.gamma.front() / 2.0) *
                         std::abs(alpha);
    const DarkState dark = dark_state(n, delta, omega);
    const DriveConfig dc{rc.array, 0.0, alpha};
    const LindbladSystem sys(dc);
    const SteadyStateResult ss = solve_steady(dc);

    const Complex overlap =
        (dark.amplitudes.adjoint() * ss.rho * dark.amplitudes)(0);
    const double h_residual = (sys.hamiltonian() * dark.amplitudes).norm();
    const Eigen::MatrixXcd proj =
        dark.amplitudes * dark.amplitudes.adjoint();
    const double l_residual = sys.apply(proj).cwiseAbs().maxCoeff();

    Table t;
    t.columns = {"fidelity", "h_residual", "l_residual", "T", "R",
                 "F_over_alpha2"};
    t.rows.push_back({overlap.real(), h_residual, l_residual,
                      ss.transmittance, ss.reflectance,
                      ss.inelastic_flux / rc.drive.alpha2});
    return t;
}

}  // namespace

int run(const RunConfig& rc) {
    std::string path = rc.output.path;
    if (path.empty())
        path = std::string(to_string(rc.mode)) +
               (rc.output.format == OutputFormat::Csv ? ".csv" : ".json");
    bool file_created = false;
    try {
        Table table;
        switch (rc.mode) {
            case RunMode::Spectrum: table = run_spectrum(rc); break;
            case RunMode::Modes: table = run_modes(rc); break;
            case RunMode::Poles: table = run_poles(rc); break;
            case RunMode::Lindblad: table = run_lindblad(rc); break;
            case RunMode::DarkState: table = run_darkstate(rc); break;
        }
        file_created = true;
        write_output(rc, table, path);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        if (file_created) {
            std::error_code ec;
            std::filesystem::remove(path, ec);
        }
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace wqed
