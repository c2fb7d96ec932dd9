#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "wqed/array_model.hpp"

namespace wqed {

/// Coherently driven array. |alpha|^2 is the incident photon flux
/// (photons per unit Gamma time).
struct DriveConfig {
    ArrayConfig base;
    double delta_k = 0.0;
    Complex alpha{0.0, 0.0};
};

/// Steady state of the driven array with derived output quantities.
struct SteadyStateResult {
    Eigen::MatrixXcd rho;
    Complex t{0.0, 0.0};
    Complex r{0.0, 0.0};
    double transmittance = 0.0;
    double reflectance = 0.0;
    double inelastic_flux = 0.0;  // photons per unit time
};

/// Analytic drive-stationary dark state (ladder-frequency arrays, even N).
struct DarkState {
    Eigen::VectorXcd amplitudes;  // unit norm, over the 2^N product basis
    double normalization = 1.0;
};

/// Lowering operator of atom `i` (0-based) in the 2^N product basis;
/// atom 0 occupies the most significant bit.
Eigen::MatrixXcd sigma_minus(int n_atoms, int i);

/// Precomputed operators of the driven dissipative array.
class LindbladSystem {
  public:
    explicit LindbladSystem(const DriveConfig& dc);

    int dim() const { return dim_; }
    const Eigen::MatrixXcd& hamiltonian() const { return hamiltonian_; }

    /// L(rho): Lindblad generator applied to a density matrix.
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

    /// Dense superoperator in column-major vec convention (dim^2 x dim^2).
    Eigen::MatrixXcd liouvillian() const;

    /// Output-field operators (drive-subtracted parts), transmitted and
    /// reflected channels.
    const Eigen::MatrixXcd& output_transmitted() const { return out_t_; }
    const Eigen::MatrixXcd& output_reflected() const { return out_r_; }

    const DriveConfig& config() const { return config_; }

  private:
    DriveConfig config_;
    int dim_;
    Eigen::MatrixXcd hamiltonian_;
    std::vector<Eigen::MatrixXcd> lowering_;       // sigma_i^-
    std::vector<Eigen::MatrixXcd> weighted_drop_;  // sum_i K_ij sigma_i^-
    Eigen::MatrixXcd damping_;                     // sum_ij K_ij sigma_i^+ sigma_j^-
    Eigen::MatrixXcd out_t_, out_r_;
};

/// Rotating-frame drive Hamiltonian of the array (Hermitian). N <= 12.
Eigen::MatrixXcd build_drive_hamiltonian(const DriveConfig& dc);

/// Dense Liouvillian superoperator. N <= 6.
Eigen::MatrixXcd build_liouvillian(const DriveConfig& dc);

/// Steady state of a dense Liouvillian (trace-one solution of L rho = 0).
Eigen::MatrixXcd steady_state(const Eigen::MatrixXcd& liouvillian);

/// Steady state for a drive configuration; dense solve up to N = 6,
/// matrix-free iterative solve for N = 7, 8.
Eigen::MatrixXcd steady_state(const DriveConfig& dc);

/// Input-output transmission and reflection amplitudes from the steady state.
std::pair<Complex, Complex> io_amplitudes(const Eigen::MatrixXcd& rho,
                                          const DriveConfig& dc);

/// Total inelastic photon flux: output-field fluctuations summed over both
/// channels, F = sum (<b'b> - |<b>|^2).
double inelastic_flux(const Eigen::MatrixXcd& rho, const DriveConfig& dc);

/// Steady state plus all derived outputs.
SteadyStateResult solve_steady(const DriveConfig& dc);

struct SpectrumOptions {
    std::optional<double> tau_max;  // default: 20 / slowest decay rate
    std::optional<double> dt;
};

struct InelasticSpectrum {
    std::vector<double> omega;
    std::vector<double> transmitted;  // S_t(omega)
    std::vector<double> reflected;    // S_r(omega)
};

/// Incoherent power spectra of both output channels via the quantum
/// regression rule; normalized so that the frequency integral of each
/// channel equals its contribution to the inelastic flux.
InelasticSpectrum inelastic_spectrum(const DriveConfig& dc,
                                     const std::vector<double>& omega_grid,
                                     const SpectrumOptions& opt = {});

/// Analytic dark state of a ladder array (spacing `delta`) driven on
/// resonance with real collective Rabi frequency `omega`. N = 2 or 4; the
/// returned vector is verified to be annihilated by the drive Hamiltonian
/// and stationary under the full Lindblad generator.
DarkState dark_state(int n_atoms, double delta, double omega);

}  // namespace wqed
