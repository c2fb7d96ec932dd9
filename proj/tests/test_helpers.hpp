#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "wqed/array_model.hpp"

namespace wqed::testing {

/// Zero-mean random detunings with a minimum pairwise gap.
inline std::vector<double> random_detunings(std::mt19937& rng, int n,
                                            double span = 2.0,
                                            double min_gap = 1e-3) {
    std::uniform_real_distribution<double> dist(-span, span);
    std::vector<double> dw(n);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (double& w : dw) w = dist(rng);
        double mean = 0.0;
        for (double w : dw) mean += w;
        for (double& w : dw) w -= mean / n;
        std::vector<double> s = dw;
        std::sort(s.begin(), s.end());
        bool ok = true;
        for (int i = 1; i < n; ++i)
            if (s[i] - s[i - 1] < min_gap) ok = false;
        if (ok) return dw;
    }
    throw std::runtime_error("random_detunings: sampling failed");
}

/// Independent oracle for the effective detunings: the secular equation
/// sum_m 1/(x - dw_m) = 0 has one real root in each gap between consecutive
/// detunings; locate them by bisection on the polynomial form
/// sum_m prod_{j != m} (x - dw_j), which has no poles.
inline std::vector<double> secular_roots(std::vector<double> dw) {
    std::sort(dw.begin(), dw.end());
    const int n = static_cast<int>(dw.size());
    auto f = [&](double x) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            double p = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != m) p *= x - dw[j];
            acc += p;
        }
        return acc;
    };
    std::vector<double> roots;
    for (int g = 0; g + 1 < n; ++g) {
        double lo = dw[g], hi = dw[g + 1];
        double flo = f(lo);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    return roots;
}

/// Sorted complex spectrum (by real part, then imaginary).
inline std::vector<Complex> sorted_spectrum(const Eigen::MatrixXcd& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<Complex> ev(es.eigenvalues().data(),
                            es.eigenvalues().data() + m.rows());
    std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return ev;
}

/// Largest nearest-neighbor distance between two spectra (symmetric). Robust
/// against the unstable ordering of eigenvalues with equal real parts.
inline double spectrum_distance(const std::vector<Complex>& a,
                                const std::vector<Complex>& b) {
    double worst = 0.0;
    auto one_sided = [&](const std::vector<Complex>& x,
                         const std::vector<Complex>& y) {
        for (Complex u : x) {
            double best = std::numeric_limits<double>::infinity();
            for (Complex v : y) best = std::min(best, std::abs(u - v));
            worst = std::max(worst, best);
        }
    };
    one_sided(a, b);
    one_sided(b, a);
    return worst;
}

}  // namespace wqed::testing
