#include "wqed/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wqed {

namespace {

constexpr Complex kI{0.0, 1.0};

// prod_k (x - w_k) as ascending coefficients.
std::vector<Complex> monic_from_roots(const std::vector<double>& roots) {
    std::vector<Complex> p{Complex{1.0, 0.0}};
    for (double w : roots) {
        std::vector<Complex> q(p.size() + 1, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i + 1] += p[i];
            q[i] -= w * p[i];
        }
        p = std::move(q);
    }
    return p;
}

Complex eval_poly(const std::vector<Complex>& coeffs, Complex x) {
    Complex acc{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

std::vector<Complex> derivative(const std::vector<Complex>& coeffs) {
    std::vector<Complex> d(coeffs.size() > 1 ? coeffs.size() - 1 : 1,
                           Complex{0.0, 0.0});
    for (std::size_t i = 1; i < coeffs.size(); ++i)
        d[i - 1] = static_cast<double>(i) * coeffs[i];
    return d;
}

struct Emitters {
    std::vector<double> freq;
    std::vector<double> decay;
};

Emitters effective_emitters(const ArrayConfig& cfg) {
    const DegenerateReduction red = reduce_degenerate(cfg);
    Emitters em;
    for (const auto& e : red.effective_emitters) {
        em.freq.push_back(e.detuning);
        em.decay.push_back(e.effective_decay);
    }
    return em;
}

// Q(x) = -(i/2) sum_k decay_k prod_{j != k} (x - w_j)
std::vector<Complex> numerator_from(const Emitters& em) {
    const std::size_t n = em.freq.size();
    std::vector<Complex> q(n, Complex{0.0, 0.0});
    q.resize(std::max<std::size_t>(n, 1), Complex{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> others;
        for (std::size_t j = 0; j < n; ++j)
            if (j != k) others.push_back(em.freq[j]);
        const auto part = monic_from_roots(others);
        for (std::size_t i = 0; i < part.size(); ++i)
            q[i] -= 0.5 * kI * em.decay[k] * part[i];
    }
    return q;
}

// Real window centers: roots of sum_k decay_k prod_{j != k}(x - w_j), one in
// each gap between consecutive emitter frequencies (found by bisection).
std::vector<double> window_centers(const Emitters& em) {
    std::vector<double> freq = em.freq;
    std::vector<double> decay = em.decay;
    const std::size_t n = freq.size();
    std::vector<double> centers;
    if (n < 2) return centers;

    // sort jointly
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return freq[a] < freq[b]; });

    auto f = [&](double x) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double p = decay[k];
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) p *= x - freq[j];
            acc += p;
        }
        return acc;
    };

    for (std::size_t g = 0; g + 1 < n; ++g) {
        double lo = freq[idx[g]];
        double hi = freq[idx[g + 1]];
        const double pad = 1e-14 * std::max(1.0, std::abs(hi - lo));
        lo += pad;
        hi -= pad;
        double flo = f(lo);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        centers.push_back(0.5 * (lo + hi));
    }
    return centers;
}

}  // namespace

std::vector<Complex> denominator_polynomial(const ArrayConfig& cfg) {
    cfg.validate();
    const Emitters em = effective_emitters(cfg);
    std::vector<Complex> p = monic_from_roots(em.freq);
    // P(x) = prod(x - w_k) + (i/2) sum_k decay_k prod_{j != k}(x - w_j);
    // the cleared numerator carries the opposite sign of the coupling term
    const std::vector<Complex> q = numerator_from(em);
    for (std::size_t i = 0; i < q.size(); ++i) p[i] -= q[i];
    return p;
}

std::vector<Complex> numerator_polynomial(const ArrayConfig& cfg) {
    cfg.validate();
    return numerator_from(effective_emitters(cfg));
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg < 1) return {};
    if (std::abs(coeffs.back()) == 0.0)
        throw ConfigError("polynomial_roots: zero leading coefficient");

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i)
        companion(i, deg - 1) = -coeffs[i] / coeffs.back();

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    if (es.info() != Eigen::Success)
        throw NumericError("polynomial_roots: eigenvalue solver failed");
    std::vector<Complex> roots(es.eigenvalues().data(),
                               es.eigenvalues().data() + deg);
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

PoleSet find_poles(const ArrayConfig& cfg) {
    cfg.validate();
    const Emitters em = effective_emitters(cfg);
    PoleSet ps;
    ps.poles = polynomial_roots(denominator_polynomial(cfg));
    for (std::size_t i = 0; i < ps.poles.size(); ++i)
        for (std::size_t j = i + 1; j < ps.poles.size(); ++j)
            if (std::abs(ps.poles[i] - ps.poles[j]) < 1e-8)
                ps.ill_conditioned = true;
    for (double c : window_centers(em)) ps.windows.push_back({c});
    return ps;
}

PoleSet partial_fractions(const ArrayConfig& cfg) {
    PoleSet ps = find_poles(cfg);
    const auto p = denominator_polynomial(cfg);
    const auto q = numerator_polynomial(cfg);
    const auto dp = derivative(p);
    ps.residues.reserve(ps.poles.size());
    for (Complex z : ps.poles)
        ps.residues.push_back(eval_poly(q, z) / eval_poly(dp, z));
    return ps;
}

std::vector<PoleSet::Window> classify_windows(const PoleSet& ps,
                                              const ClassifyOptions& opt) {
    if (ps.poles.size() < 2) return {};  // no window between fewer poles

    std::vector<PoleSet::Window> out = ps.windows;
    for (auto& win : out) {
        // The resonance the dip sits on: nearest pole by resonance position,
        // ties broken towards the narrower one.
        std::size_t near = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ps.poles.size(); ++i) {
            const double d = std::abs(ps.poles[i].real() - win.center);
            const double width = -ps.poles[i].imag();
            if (d < best - 1e-12 ||
                (std::abs(d - best) <= 1e-12 &&
                 width < -ps.poles[near].imag())) {
                best = d;
                near = i;
            }
        }
        const Complex zn = ps.poles[near];
        const double narrow_width = -zn.imag();

        // EIT: a strictly wider resonance overlaps the narrow one.
        bool eit = false;
        for (std::size_t i = 0; i < ps.poles.size(); ++i) {
            if (i == near) continue;
            const double wide_width = -ps.poles[i].imag();
            if (wide_width <= narrow_width) continue;
            if (std::abs(zn.real() - ps.poles[i].real()) <
                opt.overlap_factor * wide_width) {
                eit = true;
                break;
            }
        }
        if (eit) {
            win.label = WindowLabel::EIT;
            continue;
        }

        // ATS: every pair of resonances bracketing the dip is separated by
        // more than the sum of their half-widths.
        bool has_pair = false, all_gapped = true;
        for (std::size_t i = 0; i < ps.poles.size(); ++i) {
            if (ps.poles[i].real() >= win.center) continue;
            for (std::size_t j = 0; j < ps.poles.size(); ++j) {
                if (ps.poles[j].real() <= win.center) continue;
                has_pair = true;
                const double sep = ps.poles[j].real() - ps.poles[i].real();
                const double widths =
                    -(ps.poles[i].imag() + ps.poles[j].imag());
                if (sep <= opt.gap_factor * widths) all_gapped = false;
            }
        }
        win.label = (has_pair && all_gapped) ? WindowLabel::ATS
                                             : WindowLabel::Ambiguous;
    }
    return out;
}

}  // namespace wqed
