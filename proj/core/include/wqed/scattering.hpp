#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "wqed/array_model.hpp"

namespace wqed {

/// Single-photon scattering amplitudes at one probe detuning.
struct ScatteringResult {
    double delta_k = 0.0;
    Complex t{1.0, 0.0};
    Complex r{0.0, 0.0};
    double transmittance = 1.0;  // |t|^2
    double reflectance = 0.0;    // |r|^2
};

struct SpectrumSweep {
    std::vector<double> grid;  // strictly increasing
    std::vector<ScatteringResult> results;
};

/// Site transfer matrix T_i and phase matrix T_phi at detuning delta_k.
/// Throws OnAtomResonance when delta_k coincides with the bare frequency.
std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> single_site_matrices(
    const ArrayConfig& cfg, int site, double delta_k);

/// Exact transfer-matrix scattering; arbitrary decay rates and phases.
/// Detunings on a bare atomic resonance are handled by the analytic limit
/// (the resonant site acts as a perfect mirror).
ScatteringResult scatter(const ArrayConfig& cfg, double delta_k);

/// Closed-form amplitudes t = 1/(1 + i(G/2) sum 1/(dk - dw_i)), evaluated in
/// the pole-free rational form. Requires regular spacing and equal decay.
ScatteringResult closed_form(const ArrayConfig& cfg, double delta_k);

/// One result per grid point; uses the closed form when its preconditions
/// hold, otherwise the transfer-matrix path.
SpectrumSweep sweep(const ArrayConfig& cfg, const std::vector<double>& grid);

/// Uniform grid helper.
std::vector<double> linspace(double lo, double hi, int points);

}  // namespace wqed
