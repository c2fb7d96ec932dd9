#include "wqed/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace wqed {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

void require_regular_equal(const ArrayConfig& cfg, const char* op) {
    if (!cfg.regular_equal()) {
        throw ConfigError(std::string(op) +
                          ": requires regular spacing (spacing_multiple) and "
                          "equal decay rates");
    }
}

}  // namespace

ArrayConfig ArrayConfig::regular(std::vector<double> delta_omega,
                                 int spacing_multiple, double gamma) {
    ArrayConfig cfg;
    cfg.n_atoms = static_cast<int>(delta_omega.size());
    cfg.delta_omega = std::move(delta_omega);
    cfg.gamma.assign(cfg.n_atoms, gamma);
    cfg.phase.resize(cfg.n_atoms);
    for (int i = 0; i < cfg.n_atoms; ++i)
        cfg.phase[i] = static_cast<double>(i) * spacing_multiple * kPi;
    cfg.spacing_multiple = spacing_multiple;
    cfg.validate();
    return cfg;
}

void ArrayConfig::validate() const {
    const auto n = static_cast<std::size_t>(n_atoms);
    if (n_atoms < 0) throw ConfigError("n_atoms: must be nonnegative");
    if (delta_omega.size() != n || gamma.size() != n || phase.size() != n)
        throw ConfigError("delta_omega/gamma/phase: length must equal n_atoms");

    const double sum =
        std::accumulate(delta_omega.begin(), delta_omega.end(), 0.0);
    if (std::abs(sum) > 1e-12 * std::max(1, n_atoms))
        throw ConfigError("delta_omega: must have zero mean");

    for (double g : gamma)
        if (!(g > 0.0)) throw ConfigError("gamma: all rates must be positive");

    for (std::size_t i = 1; i < n; ++i)
        if (phase[i] < phase[i - 1])
            throw ConfigError("phase: must be nondecreasing");

    if (spacing_multiple) {
        if (*spacing_multiple <= 0)
            throw ConfigError("spacing_multiple: must be positive");
        const double step = *spacing_multiple * kPi;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(phase[i] - phase[i - 1] - step) > 1e-12)
                throw ConfigError(
                    "phase: spacing inconsistent with spacing_multiple");
    }
}

bool ArrayConfig::regular_equal(double tol) const {
    if (!spacing_multiple) return false;
    for (double g : gamma)
        if (std::abs(g - gamma.front()) > tol) return false;
    return true;
}

Eigen::MatrixXcd build_effective_hamiltonian(const ArrayConfig& cfg) {
    cfg.validate();
    const int n = cfg.n_atoms;
    Eigen::MatrixXcd h(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double phi = std::abs(cfg.phase[i] - cfg.phase[j]);
            h(i, j) = -0.5 * kI * std::sqrt(cfg.gamma[i] * cfg.gamma[j]) *
                      std::exp(kI * phi);
            if (i == j) h(i, j) += cfg.delta_omega[i];
        }
    }
    return h;
}

Eigen::MatrixXcd collective_transform(const ArrayConfig& cfg) {
    cfg.validate();
    require_regular_equal(cfg, "collective_transform");
    const int n = cfg.n_atoms;
    const int sm = *cfg.spacing_multiple;
    Eigen::MatrixXcd u(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // mode index i, atom index j; both 1-based in the phase factors
            const double arg = -2.0 * kPi / n * i * (j + 1);
            const double sign = (static_cast<long>(j) * sm) % 2 ? -1.0 : 1.0;
            u(i, j) = norm * sign * std::exp(kI * arg);
        }
    }
    return u;
}

Eigen::MatrixXcd coupling_strengths(const ArrayConfig& cfg) {
    cfg.validate();
    require_regular_equal(cfg, "coupling_strengths");
    const int n = cfg.n_atoms;
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Complex acc{0.0, 0.0};
            for (int m = 1; m <= n; ++m)
                acc += cfg.delta_omega[m - 1] *
                       std::exp(kI * (2.0 * kPi / n * (j - i) * m));
            g(i, j) = acc / static_cast<double>(n);
        }
    }
    return g;
}

CollectiveDecomposition decompose(const ArrayConfig& cfg,
                                  double degeneracy_tol) {
    cfg.validate();
    require_regular_equal(cfg, "decompose");
    const int n = cfg.n_atoms;
    if (n < 2) throw ConfigError("decompose: needs at least two atoms");

    std::vector<double> sorted = cfg.delta_omega;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 1; i < n; ++i)
        if (sorted[i] - sorted[i - 1] < degeneracy_tol)
            throw NearDegenerate(
                "decompose: two detunings closer than the degeneracy "
                "tolerance; use reduce_degenerate");

    const Eigen::MatrixXcd g = coupling_strengths(cfg);

    CollectiveDecomposition dec;
    dec.superradiant_decay = n * cfg.gamma.front();
    dec.subradiant_block = g.bottomRightCorner(n - 1, n - 1);
    dec.bright_coupling_row = g.row(0).tail(n - 1);

    // The subradiant block is Hermitian with vanishing diagonal, so its
    // eigenvalues are the real effective detunings.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dec.subradiant_block);
    if (es.info() != Eigen::Success)
        throw NumericError("decompose: eigenvalue solver failed");

    Eigen::MatrixXcd vectors = es.eigenvectors();  // columns, ascending
    // Phase gauge: first nonzero component of each eigenvector real positive.
    for (int c = 0; c < vectors.cols(); ++c) {
        for (int r = 0; r < vectors.rows(); ++r) {
            const Complex v = vectors(r, c);
            if (std::abs(v) > 1e-12) {
                vectors.col(c) *= std::conj(v) / std::abs(v);
                break;
            }
        }
    }

    dec.subradiant_transform = vectors.adjoint();
    dec.effective_detunings.assign(es.eigenvalues().data(),
                                   es.eigenvalues().data() + n - 1);
    dec.effective_couplings.resize(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        Complex acc{0.0, 0.0};
        for (int j = 0; j < n - 1; ++j)
            acc += dec.bright_coupling_row(j) *
                   std::conj(dec.subradiant_transform(i, j));
        dec.effective_couplings[i] = acc;
    }
    return dec;
}

Eigen::MatrixXcd CollectiveDecomposition::hamiltonian() const {
    const int m = static_cast<int>(effective_detunings.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    h(0, 0) = Complex(0.0, -0.5 * superradiant_decay);
    for (int i = 0; i < m; ++i) {
        h(i + 1, i + 1) = effective_detunings[i];
        h(0, i + 1) = effective_couplings[i];
        h(i + 1, 0) = std::conj(effective_couplings[i]);
    }
    return h;
}

DegenerateReduction reduce_degenerate(const ArrayConfig& cfg, double tol) {
    cfg.validate();
    require_regular_equal(cfg, "reduce_degenerate");
    const double gamma = cfg.n_atoms ? cfg.gamma.front() : 1.0;

    std::vector<double> sorted = cfg.delta_omega;
    std::sort(sorted.begin(), sorted.end());

    DegenerateReduction red;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        double acc = sorted[i];
        while (j < sorted.size() && sorted[j] - sorted[j - 1] <= tol)
            acc += sorted[j++];
        const int mult = static_cast<int>(j - i);
        red.groups.push_back({acc / mult, mult});
        i = j;
    }
    for (const auto& grp : red.groups)
        red.effective_emitters.push_back(
            {grp.frequency, grp.multiplicity * gamma});
    red.window_count = static_cast<int>(red.effective_emitters.size()) - 1;
    return red;
}

MultiLevelModel map_to_multilevel(const CollectiveDecomposition& dec) {
    MultiLevelModel model;
    model.excited_decay = dec.superradiant_decay;
    model.control_detunings = dec.effective_detunings;
    model.rabi_frequencies = dec.effective_couplings;
    return model;
}

Eigen::MatrixXcd MultiLevelModel::hamiltonian() const {
    const int m = static_cast<int>(control_detunings.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    h(0, 0) = Complex(0.0, -0.5 * excited_decay);
    for (int i = 0; i < m; ++i) {
        h(i + 1, i + 1) = control_detunings[i];
        h(0, i + 1) = rabi_frequencies[i];
        h(i + 1, 0) = std::conj(rabi_frequencies[i]);
    }
    return h;
}

}  // namespace wqed
