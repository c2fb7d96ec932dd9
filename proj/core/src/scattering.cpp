#include "wqed/scattering.hpp"

#include <cmath>

namespace wqed {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kResonanceTol = 1e-12;

// alpha -> infinity limit of the site matrix: the resonant atom reflects
// everything, and only the leading rank-one part survives in the product.
const Eigen::Matrix2cd kMirrorLimit =
    (Eigen::Matrix2cd() << -1.0, -1.0, 1.0, 1.0).finished();

Eigen::Matrix2cd phase_conjugate(const Eigen::Matrix2cd& m, double phi) {
    // T_phi^{-1} m T_phi with T_phi = diag(e^{i phi}, e^{-i phi})
    Eigen::Matrix2cd out = m;
    out(0, 1) *= std::exp(-2.0 * kI * phi);
    out(1, 0) *= std::exp(2.0 * kI * phi);
    return out;
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 1) throw ConfigError("linspace: needs at least one point");
    if (points > 1 && hi <= lo)
        throw ConfigError("linspace: hi must exceed lo");
    std::vector<double> grid(points);
    if (points == 1) {
        grid[0] = lo;
        return grid;
    }
    for (int i = 0; i < points; ++i)
        grid[i] = lo + (hi - lo) * i / (points - 1);
    return grid;
}

std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> single_site_matrices(
    const ArrayConfig& cfg, int site, double delta_k) {
    const double d = delta_k - cfg.delta_omega.at(site);
    if (std::abs(d) < kResonanceTol)
        throw OnAtomResonance(
            "single_site_matrices: probe on the bare atomic resonance");
    const Complex alpha = (d + 0.5 * kI * cfg.gamma[site]) / d;

    Eigen::Matrix2cd t;
    t << 2.0 - alpha, 1.0 - alpha, -1.0 + alpha, alpha;
    Eigen::Matrix2cd tphi = Eigen::Matrix2cd::Zero();
    tphi(0, 0) = std::exp(kI * cfg.phase[site]);
    tphi(1, 1) = std::exp(-kI * cfg.phase[site]);
    return {t, tphi};
}

ScatteringResult scatter(const ArrayConfig& cfg, double delta_k) {
    cfg.validate();
    ScatteringResult res;
    res.delta_k = delta_k;
    if (cfg.n_atoms == 0) return res;

    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    bool on_resonance = false;
    for (int i = 0; i < cfg.n_atoms; ++i) {
        Eigen::Matrix2cd site;
        if (std::abs(delta_k - cfg.delta_omega[i]) < kResonanceTol) {
            on_resonance = true;
            site = phase_conjugate(kMirrorLimit, cfg.phase[i]);
        } else {
            auto [t, tphi] = single_site_matrices(cfg, i, delta_k);
            site = phase_conjugate(t, cfg.phase[i]);
        }
        m = site * m;  // site 1 applied first
    }

    res.r = -m(1, 0) / m(1, 1);
    // det of every regular factor is 1, so t = 1/M_22 avoids the
    // cancellation in M_11 + M_12 r. A resonant site forces t = 0.
    res.t = on_resonance ? Complex{0.0, 0.0} : 1.0 / m(1, 1);
    res.transmittance = std::norm(res.t);
    res.reflectance = std::norm(res.r);
    return res;
}

ScatteringResult closed_form(const ArrayConfig& cfg, double delta_k) {
    cfg.validate();
    ScatteringResult res;
    res.delta_k = delta_k;
    if (cfg.n_atoms == 0) return res;
    if (!cfg.regular_equal())
        throw ConfigError(
            "closed_form: requires regular spacing and equal decay rates");

    const int n = cfg.n_atoms;
    const double gamma = cfg.gamma.front();

    // Pole-free rational form: multiply numerator and denominator of
    // 1 + i(G/2) sum_i 1/(dk - dw_i) by prod_i (dk - dw_i).
    Complex prod_all{1.0, 0.0};
    for (int i = 0; i < n; ++i) prod_all *= delta_k - cfg.delta_omega[i];
    Complex sum_partial{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        Complex p{1.0, 0.0};
        for (int j = 0; j < n; ++j)
            if (j != i) p *= delta_k - cfg.delta_omega[j];
        sum_partial += p;
    }
    const Complex coupling = 0.5 * kI * gamma * sum_partial;
    const Complex denom = prod_all + coupling;

    res.t = prod_all / denom;
    // the reflected amplitude carries the opposite sign, fixed by the
    // boundary conditions of the transfer-matrix product
    res.r = -coupling / denom;
    res.transmittance = std::norm(res.t);
    res.reflectance = std::norm(res.r);
    return res;
}

SpectrumSweep sweep(const ArrayConfig& cfg, const std::vector<double>& grid) {
    cfg.validate();
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw ConfigError("sweep: grid must be strictly increasing");

    const bool use_closed = cfg.n_atoms == 0 || cfg.regular_equal();
    SpectrumSweep sw;
    sw.grid = grid;
    sw.results.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        sw.results[i] =
            use_closed ? closed_form(cfg, grid[i]) : scatter(cfg, grid[i]);
    return sw;
}

}  // namespace wqed
