#pragma once

#include <string>
#include <vector>

#include "wqed/array_model.hpp"

namespace wqed {

enum class RunMode { Spectrum, Modes, Poles, Lindblad, DarkState };

struct GridSpec {
    double min = -4.0;
    double max = 4.0;
    int points = 2001;
};

struct DriveSpec {
    double alpha2 = 0.01;  // |alpha|^2
    double phase = 0.0;    // arg(alpha)
};

enum class OutputFormat { Csv, Json };

struct OutputSpec {
    std::string path;  // empty: derived from the mode name
    OutputFormat format = OutputFormat::Csv;
};

struct RunConfig {
    ArrayConfig array;
    RunMode mode = RunMode::Spectrum;
    GridSpec grid;
    DriveSpec drive;
    OutputSpec output;
};

/// Parses a JSON run configuration; applies defaults (Gamma = 1, grid
/// [-4,4]x2001, csv) and auto-centers delta_omega with a warning when its
/// mean is off by more than 1e-9. Throws ConfigError with the field path.
RunConfig parse_config(const std::string& text,
                       std::vector<std::string>* warnings = nullptr);

/// Config echo written into every output header; parse_config(emit_config(rc))
/// round-trips.
std::string emit_config(const RunConfig& rc);

const char* to_string(RunMode mode);

/// Exit status: 0 ok, 2 config error, 3 numeric failure. Diagnostics go to
/// stderr; partial output files are removed on failure.
int run(const RunConfig& rc);

}  // namespace wqed
