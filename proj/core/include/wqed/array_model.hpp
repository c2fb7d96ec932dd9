#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "wqed/errors.hpp"

namespace wqed {

using Complex = std::complex<double>;

/// An atom array coupled to a one-dimensional waveguide. All frequencies and
/// rates are in units of the reference single-atom decay rate (Gamma = 1);
/// detunings delta_omega are measured from the mean atomic frequency, so they
/// sum to zero.
struct ArrayConfig {
    int n_atoms = 0;
    std::vector<double> delta_omega;  // zero-mean detunings
    std::vector<double> gamma;        // per-atom decay rates, > 0
    std::vector<double> phase;        // propagation phases, nondecreasing
    std::optional<int> spacing_multiple;  // set when phase[i+1]-phase[i] == n*pi

    /// Regularly spaced array with equal decay rates: phase[i] = i*n*pi.
    static ArrayConfig regular(std::vector<double> delta_omega,
                               int spacing_multiple = 1, double gamma = 1.0);

    void validate() const;  // throws ConfigError

    /// True when the collective-mode analysis applies: regular spacing
    /// (spacing_multiple set) and all decay rates equal.
    bool regular_equal(double tol = 1e-12) const;
};

/// Superradiant/subradiant mode data of a regularly spaced array.
struct CollectiveDecomposition {
    double superradiant_decay = 0.0;            // N * Gamma
    std::vector<double> effective_detunings;    // Delta_i, ascending
    std::vector<Complex> effective_couplings;   // g_i, paired with Delta_i
    Eigen::MatrixXcd subradiant_block;          // (N-1)x(N-1) coupling matrix
    Eigen::VectorXcd bright_coupling_row;       // couplings bright -> dark
    Eigen::MatrixXcd subradiant_transform;      // unitary V, rows are modes

    /// Collective-basis non-Hermitian Hamiltonian: bright mode with decay
    /// N*Gamma coupled to the dark modes at detunings Delta_i.
    Eigen::MatrixXcd hamiltonian() const;
};

/// Clustering of (nearly) identical atomic frequencies into effective
/// emitters with enhanced decay.
struct DegenerateReduction {
    struct Group {
        double frequency;
        int multiplicity;
    };
    struct Emitter {
        double detuning;
        double effective_decay;  // multiplicity * Gamma
    };
    std::vector<Group> groups;
    std::vector<Emitter> effective_emitters;
    int window_count = 0;  // number of emitters - 1
};

/// Driven multilevel system equivalent to the array: one decaying excited
/// level coupled to N-1 metastable levels by effective control fields.
struct MultiLevelModel {
    double excited_decay = 0.0;
    std::vector<double> control_detunings;
    std::vector<Complex> rabi_frequencies;

    Eigen::MatrixXcd hamiltonian() const;
};

/// Markovian effective Hamiltonian of the array in the single-excitation
/// sector: H_ij = delta_omega_i [i=j] - (i/2) sqrt(G_i G_j) e^{i|phi_i-phi_j|}.
Eigen::MatrixXcd build_effective_hamiltonian(const ArrayConfig& cfg);

/// Unitary mapping bare atoms to collective modes; row 0 is the superradiant
/// mode. Requires regular spacing and equal decay rates.
Eigen::MatrixXcd collective_transform(const ArrayConfig& cfg);

/// Coupling matrix between collective modes induced by the frequency
/// detunings: g_ij = (1/N) sum_m delta_omega_m e^{i 2pi (j-i) m / N}.
Eigen::MatrixXcd coupling_strengths(const ArrayConfig& cfg);

/// Diagonalizes the subradiant block, yielding the effective detunings and
/// bright-dark couplings. Requires distinct detunings; throws NearDegenerate
/// when two are closer than `degeneracy_tol`.
CollectiveDecomposition decompose(const ArrayConfig& cfg,
                                  double degeneracy_tol = 1e-9);

/// Clusters equal frequencies and returns the reduced effective emitter list.
DegenerateReduction reduce_degenerate(const ArrayConfig& cfg,
                                      double tol = 1e-9);

/// Maps the collective decomposition onto an equivalent driven multilevel
/// system (same complex spectrum).
MultiLevelModel map_to_multilevel(const CollectiveDecomposition& dec);

}  // namespace wqed
