// Command-line front end: runs sweeps and analyses on an atom-array
// configuration and writes machine-readable spectra and reports.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "wqed/driver.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::string grid;
    std::optional<double> alpha2;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON run configuration")
        ->required();
    cmd->add_option("--out", args.out_path, "output file path");
    cmd->add_option("--format", args.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--grid", args.grid, "probe grid as min:max:points");
    cmd->add_option("--alpha2", args.alpha2, "drive intensity |alpha|^2");
}

int run_mode(wqed::RunMode mode, const CommonArgs& args) {
    std::ifstream in(args.config_path);
    if (!in) {
        std::cerr << "config error: cannot read " << args.config_path << "\n";
        return 2;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    wqed::RunConfig rc;
    std::vector<std::string> warnings;
    try {
        rc = wqed::parse_config(buffer.str(), &warnings);
    } catch (const wqed::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    rc.mode = mode;
    if (!args.out_path.empty()) rc.output.path = args.out_path;
    if (!args.format.empty())
        rc.output.format = args.format == "json" ? wqed::OutputFormat::Json
                                                 : wqed::OutputFormat::Csv;
    if (!args.grid.empty()) {
        double lo, hi;
        int points;
        if (std::sscanf(args.grid.c_str(), "%lf:%lf:%d", &lo, &hi, &points) !=
            3) {
            std::cerr << "config error: --grid expects min:max:points\n";
            return 2;
        }
        rc.grid = {lo, hi, points};
    }
    if (args.alpha2) {
        if (*args.alpha2 < 0) {
            std::cerr << "config error: --alpha2 must be nonnegative\n";
            return 2;
        }
        rc.drive.alpha2 = *args.alpha2;
    }
    return wqed::run(rc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Waveguide-coupled atom array simulator: collective modes, "
        "single-photon scattering spectra, resonance poles, and driven "
        "open-system dynamics"};
    app.require_subcommand(1);

    const std::pair<const char*, wqed::RunMode> modes[] = {
        {"spectrum", wqed::RunMode::Spectrum},
        {"modes", wqed::RunMode::Modes},
        {"poles", wqed::RunMode::Poles},
        {"lindblad", wqed::RunMode::Lindblad},
        {"darkstate", wqed::RunMode::DarkState},
    };

    CommonArgs args;
    for (const auto& [name, mode] : modes) {
        auto* cmd = app.add_subcommand(
            name, std::string("run the ") + name + " analysis");
        add_common(cmd, args);
        cmd->callback([&args, mode = mode]() {
            std::exit(run_mode(mode, args));
        });
    }

    CLI11_PARSE(app, argc, argv);
    return 0;
}
