#pragma once

#include <vector>

#include "wqed/array_model.hpp"

namespace wqed {

enum class WindowLabel { EIT, ATS, Ambiguous };

/// Tunable thresholds of the window classifier. A window is EIT-type when its
/// narrow resonance sits within `overlap_factor` half-widths of a wider one;
/// it is ATS-type when the bracketing resonances are separated by more than
/// `gap_factor` times the sum of their half-widths.
struct ClassifyOptions {
    double overlap_factor = 1.0;
    double gap_factor = 1.0;
};

/// Pole/residue representation of the reflection amplitude,
/// r(x) = sum_i A_i / (x - Z_i), plus per-window labels.
struct PoleSet {
    std::vector<Complex> poles;     // Z_i, sorted by (Re, Im)
    std::vector<Complex> residues;  // A_i, aligned with poles
    struct Window {
        double center;  // reflectance-dip position
        WindowLabel label = WindowLabel::Ambiguous;
    };
    std::vector<Window> windows;
    bool ill_conditioned = false;  // two poles closer than 1e-8
};

/// Monic denominator polynomial of the reflection amplitude, built from the
/// clustered effective emitters: P(x) = prod(x - w_k) applied to 1 + S(x).
/// Coefficients in ascending order of degree; leading coefficient 1.
std::vector<Complex> denominator_polynomial(const ArrayConfig& cfg);

/// Cleared numerator Q(x) = -(i/2) sum_k g_k prod_{j != k} (x - w_j);
/// r = Q/P. Ascending coefficients.
std::vector<Complex> numerator_polynomial(const ArrayConfig& cfg);

/// Roots of a polynomial via companion-matrix eigenvalues.
/// Coefficients ascending; the leading coefficient must be nonzero.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);

/// Poles of the reflection amplitude (window centers filled, labels not).
PoleSet find_poles(const ArrayConfig& cfg);

/// Poles and residues A_i = Q(Z_i)/P'(Z_i).
PoleSet partial_fractions(const ArrayConfig& cfg);

/// Labels each transparency window EIT or ATS (or Ambiguous when neither
/// rule fires). Fewer than two poles means no windows; returns empty.
std::vector<PoleSet::Window> classify_windows(const PoleSet& ps,
                                              const ClassifyOptions& opt = {});

}  // namespace wqed
