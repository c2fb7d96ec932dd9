#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "wqed/driver.hpp"

using namespace wqed;

namespace {

std::string preset(const std::string& name) {
    const std::filesystem::path path =
        std::filesystem::path(WQED_PRESET_DIR) / (name + ".json");
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "missing preset ", path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("wqed_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

std::vector<std::vector<double>> data_rows(const std::string& csv) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(csv);
    std::string line;
    bool past_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!past_header) {  // column names
            past_header = true;
            continue;
        }
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("parse_config: defaults") {
    const auto rc =
        parse_config(R"({"n_atoms": 2, "delta_omega": [-0.5, 0.5]})");
    CHECK(rc.mode == RunMode::Spectrum);
    CHECK(rc.array.gamma == std::vector<double>{1.0, 1.0});
    REQUIRE(rc.array.spacing_multiple.has_value());
    CHECK(*rc.array.spacing_multiple == 1);
    CHECK(rc.array.phase[0] == doctest::Approx(0.0));
    CHECK(rc.array.phase[1] == doctest::Approx(std::numbers::pi));
    CHECK(rc.grid.points == 2001);
    CHECK(rc.output.format == OutputFormat::Csv);
}

TEST_CASE("parse_config: presets load") {
    for (const char* name : {"fig2a", "fig2b", "fig2c", "fig2d", "fig3b",
                             "fig3c", "fig4a", "fig4b", "fig4c", "fig5a",
                             "fig5b", "fig5c"}) {
        CAPTURE(name);
        CHECK_NOTHROW(parse_config(preset(name)));
    }
    const auto rc = parse_config(preset("fig5c"));
    CHECK(rc.mode == RunMode::Lindblad);
    CHECK(rc.drive.alpha2 == doctest::Approx(0.04));
    CHECK(rc.array.n_atoms == 4);
}

TEST_CASE("parse_config: detunings are centered with a warning") {
    std::vector<std::string> warnings;
    const auto rc = parse_config(
        R"({"n_atoms": 2, "delta_omega": [0.0, 1.0]})", &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(rc.array.delta_omega[0] == doctest::Approx(-0.5));
    CHECK(rc.array.delta_omega[1] == doctest::Approx(0.5));

    warnings.clear();
    parse_config(preset("fig3a"), &warnings);
    CHECK(warnings.size() == 1);
}

TEST_CASE("parse_config: schema errors") {
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"delta_omega": [0.0]})"), ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"n_atoms": 3, "delta_omega": [-0.5, 0.5]})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(
            R"({"n_atoms": 1, "delta_omega": [0.0], "mode": "banana"})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(
            R"({"n_atoms": 1, "delta_omega": [0.0], "gamma": [-1.0]})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"n_atoms": 1, "delta_omega": [0.0],
                         "grid": {"min": 1.0, "max": -1.0}})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"n_atoms": 1, "delta_omega": [0.0],
                         "drive": {"alpha2": -0.1}})"),
        ConfigError);
}

TEST_CASE("config echo round-trips") {
    for (const char* name : {"fig2a", "fig4b", "fig5c"}) {
        const auto rc = parse_config(preset(name));
        const auto back = parse_config(emit_config(rc));
        CHECK(back.mode == rc.mode);
        CHECK(back.array.n_atoms == rc.array.n_atoms);
        CHECK(back.array.delta_omega == rc.array.delta_omega);
        CHECK(back.array.gamma == rc.array.gamma);
        CHECK(back.array.phase == rc.array.phase);
        CHECK(back.grid.min == rc.grid.min);
        CHECK(back.grid.max == rc.grid.max);
        CHECK(back.grid.points == rc.grid.points);
        CHECK(back.drive.alpha2 == rc.drive.alpha2);
        CHECK(back.output.format == rc.output.format);
        CHECK(emit_config(back) == emit_config(rc));
    }
}

TEST_CASE("spectrum runs are deterministic and conservative") {
    TempDir tmp;
    auto rc = parse_config(preset("fig2a"));
    rc.output.path = (tmp.path / "a.csv").string();
    REQUIRE(run(rc) == 0);
    const std::string first = slurp(rc.output.path);

    // identical config (the echoed header includes the output path, so the
    // rerun must target the same file)
    REQUIRE(run(rc) == 0);
    CHECK(first == slurp(rc.output.path));

    const auto rows = data_rows(first);
    CHECK(rows.size() == 1201);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 7);
        CHECK(row[5] + row[6] == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(first.rfind("# wqed", 0) == 0);
    CHECK(first.find("# config: {") != std::string::npos);
}

TEST_CASE("modes output lists the ladder detunings") {
    TempDir tmp;
    RunConfig rc = parse_config(preset("fig2c"));  // spacing 0.5 ladder, N=4
    rc.mode = RunMode::Modes;
    rc.output.path = (tmp.path / "modes.csv").string();
    REQUIRE(run(rc) == 0);
    const auto rows = data_rows(slurp(rc.output.path));
    REQUIRE(rows.size() == 3);
    const double d = std::sqrt(5.0) / 2.0 * 0.5;
    CHECK(std::abs(rows[0][1] + d) < 1e-9);
    CHECK(std::abs(rows[1][1]) < 1e-9);
    CHECK(std::abs(rows[2][1] - d) < 1e-9);
    const std::string text = slurp(rc.output.path);
    CHECK(text.find("# superradiant_decay: 4.0") != std::string::npos);
    CHECK(text.find("# window_count: 3") != std::string::npos);
}

TEST_CASE("poles output carries window labels") {
    TempDir tmp;
    RunConfig rc = parse_config(preset("fig4b"));
    rc.output.path = (tmp.path / "poles.csv").string();
    REQUIRE(run(rc) == 0);
    const std::string text = slurp(rc.output.path);
    CHECK(data_rows(text).size() == 4);
    CHECK(text.find("\"EIT\"") != std::string::npos);
    CHECK(text.find("\"ATS\"") != std::string::npos);
}

TEST_CASE("json output mirrors the csv table") {
    TempDir tmp;
    RunConfig rc = parse_config(preset("fig2a"));
    rc.grid.points = 11;
    rc.output.format = OutputFormat::Json;
    rc.output.path = (tmp.path / "out.json").string();
    REQUIRE(run(rc) == 0);
    const std::string text = slurp(rc.output.path);
    CHECK(text.find("\"columns\"") != std::string::npos);
    CHECK(text.find("\"delta_k\"") != std::string::npos);
    CHECK(text.find("\"rows\"") != std::string::npos);
}

TEST_CASE("failures exit nonzero and leave no partial file") {
    TempDir tmp;
    SUBCASE("config error: dark state needs 2 or 4 atoms") {
        RunConfig rc = parse_config(preset("fig5b"));  // N = 3
        rc.mode = RunMode::DarkState;
        rc.output.path = (tmp.path / "dark.csv").string();
        CHECK(run(rc) == 2);
        CHECK(!std::filesystem::exists(rc.output.path));
    }
    SUBCASE("numeric error: degenerate modes") {
        RunConfig rc = parse_config(
            R"({"n_atoms": 2, "delta_omega": [0.0, 0.0], "mode": "modes"})");
        rc.output.path = (tmp.path / "modes.csv").string();
        CHECK(run(rc) == 3);
        CHECK(!std::filesystem::exists(rc.output.path));
    }
}

TEST_CASE("darkstate report for the driven pair") {
    TempDir tmp;
    RunConfig rc = parse_config(preset("fig5a"));
    rc.mode = RunMode::DarkState;
    rc.output.path = (tmp.path / "dark.csv").string();
    REQUIRE(run(rc) == 0);
    const auto rows = data_rows(slurp(rc.output.path));
    REQUIRE(rows.size() == 1);
    const auto& row = rows[0];
    CHECK(row[0] > 0.999);        // fidelity
    CHECK(row[1] < 1e-10);        // drive-Hamiltonian residual
    CHECK(row[2] < 1e-10);        // generator residual
    CHECK(std::abs(row[3] - 1.0) < 1e-6);  // T
    CHECK(std::abs(row[5]) < 1e-6);        // F / alpha^2
}
