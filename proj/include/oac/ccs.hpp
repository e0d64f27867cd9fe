#pragma once

// Coset cardinality spectrum: the density f_i(u) of the bitstream projection
// at level i, computed by backward recursion
//   f_{i-1}(u) = 2^{r-1} ( f_i(u 2^r) + f_i((u - (1-2^-r)) 2^r) )
// over N equal bins of [0,1), with three discretizations of increasing
// fidelity, plus the r = 1/2 closed form and derived functionals.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oac/code_config.hpp"

namespace oac {

enum class CcsScheme { Rounding, Linear, Fine };

struct Spectrum {
    std::vector<double> bins;  // bins[j] ~ N * integral of f over [j/N,(j+1)/N)
    int level = 0;

    int size() const { return static_cast<int>(bins.size()); }

    // f at bin index, 0 outside [0:N)
    double at(long j) const {
        if (j < 0 || j >= static_cast<long>(bins.size())) return 0.0;
        return bins[static_cast<std::size_t>(j)];
    }
    // nearest-bin lookup for real u
    double at_u(double u) const {
        long j = static_cast<long>(std::floor(u * size()));
        if (j < 0) j = 0;
        if (j >= size()) j = size() - 1;
        if (u < 0.0 || u >= 1.0) return 0.0;
        return bins[static_cast<std::size_t>(j)];
    }
    double mass() const {
        double s = 0.0;
        for (double b : bins) s += b;
        return s / size();
    }
    void renormalize() {
        double m = mass();
        if (m <= 0.0) throw std::runtime_error("spectrum lost all mass");
        for (double& b : bins) b /= m;
    }
};

inline Spectrum final_ccs(int N, int level = 0) {
    if (N < 2) throw std::invalid_argument("need at least 2 bins");
    Spectrum s;
    s.bins.assign(static_cast<std::size_t>(N), 1.0);
    s.level = level;
    return s;
}

inline Spectrum ccs_backward_step(const Spectrum& fi, double r, CcsScheme scheme) {
    const int N = fi.size();
    const double two_r = std::exp2(r);
    const double gap = static_cast<double>(N) * (1.0 - std::exp2(-r));
    Spectrum out;
    out.bins.assign(static_cast<std::size_t>(N), 0.0);
    out.level = fi.level - 1;
    const double half_pow = std::exp2(r - 1.0);

    auto lerp = [&](double lam) {
        double fl = std::floor(lam), cl = std::ceil(lam);
        if (fl == cl) return fi.at(static_cast<long>(lam));
        return (cl - lam) * fi.at(static_cast<long>(fl)) + (lam - fl) * fi.at(static_cast<long>(cl));
    };
    // average of f over [lam, lam + 2^r) in bin units
    auto window_avg = [&](double lam) {
        double eta = lam + two_r;
        double cl = std::ceil(lam), fe = std::floor(eta);
        double g = (cl - lam) * fi.at(static_cast<long>(cl) - 1) + (eta - fe) * fi.at(static_cast<long>(fe));
        if (fe > cl) g += fi.at(static_cast<long>(cl));  // whole bin between the fringes
        return g;
    };

    for (int j = 0; j < N; ++j) {
        double lam0 = j * two_r;
        double lam1 = (j - gap) * two_r;
        switch (scheme) {
            case CcsScheme::Rounding:
                out.bins[static_cast<std::size_t>(j)] =
                    half_pow * (fi.at(std::lround(lam0)) + fi.at(std::lround(lam1)));
                break;
            case CcsScheme::Linear:
                out.bins[static_cast<std::size_t>(j)] = half_pow * (lerp(lam0) + lerp(lam1));
                break;
            case CcsScheme::Fine:
                out.bins[static_cast<std::size_t>(j)] = 0.5 * (window_avg(lam0) + window_avg(lam1));
                break;
        }
    }
    // Rounding/Linear need this to stay normalized; for Fine it is only a
    // drift guard.
    out.renormalize();
    return out;
}

// Spectra for levels n..0 (returned[k] is level n-k). Tail levels are
// uniform; body levels recurse at the body rate.
inline std::vector<Spectrum> compute_ccs(const CodeConfig& cfg, int N, CcsScheme scheme) {
    std::vector<Spectrum> levels;
    levels.reserve(static_cast<std::size_t>(cfg.n) + 1);
    levels.push_back(final_ccs(N, cfg.n));
    for (int i = cfg.n; i >= 1; --i) {
        const Spectrum& fi = levels.back();
        if (i > cfg.body_len() || cfg.r == 0.0) {
            Spectrum s = fi;  // rate-1 tail step (or degenerate r=0): identity
            s.level = i - 1;
            levels.push_back(std::move(s));
        } else {
            levels.push_back(ccs_backward_step(fi, cfg.r, scheme));
        }
    }
    return levels;
}

// Iterate from uniform until the L1 change per bin is < 1e-8 (or 4*max_n
// steps); the fixed point approximates the asymptotic spectrum.
inline Spectrum converged_ccs(double r, int N, CcsScheme scheme = CcsScheme::Fine, int max_n = 64) {
    Spectrum f = final_ccs(N);
    for (int step = 0; step < 4 * max_n; ++step) {
        Spectrum g = ccs_backward_step(f, r, scheme);
        double l1 = 0.0;
        for (int j = 0; j < N; ++j)
            l1 += std::abs(g.bins[static_cast<std::size_t>(j)] - f.bins[static_cast<std::size_t>(j)]);
        f = std::move(g);
        if (l1 / N < 1e-8) break;
    }
    f.level = 0;
    return f;
}

// Closed form of the asymptotic spectrum at r = 1/2.
inline double asymptotic_ccs_half_rate(double u) {
    static const double sqrt2 = std::sqrt(2.0);
    if (u < 0.0 || u >= 1.0) return 0.0;
    if (u < sqrt2 - 1.0) return u / (3.0 * sqrt2 - 4.0);
    if (u < 2.0 - sqrt2) return 1.0 / (2.0 - sqrt2);
    return (1.0 - u) / (3.0 * sqrt2 - 4.0);
}

// p(x | u) = 2^{r-1} f_i((u - x(1-2^-r)) 2^r) / f_{i-1}(u)
inline double conditional_symbol_prob(double u, int x, const Spectrum& f_prev, const Spectrum& f_cur,
                                      double r) {
    double denom = f_prev.at_u(u);
    if (denom <= 0.0) throw std::domain_error("conditional probability undefined where f_{i-1}(u) = 0");
    double shifted = (u - x * (1.0 - std::exp2(-r))) * std::exp2(r);
    double p = std::exp2(r - 1.0) * f_cur.at_u(shifted) / denom;
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

// normalized expected coset cardinality: integral of f^2
inline double ecc_normalized(const Spectrum& f0) {
    double s = 0.0;
    for (double b : f0.bins) s += b * b;
    return s / f0.size();
}

// integral of f log2 f (bits); 0 log 0 = 0
inline double rate_loss(const Spectrum& f0) {
    double s = 0.0;
    for (double b : f0.bins)
        if (b > 0.0) s += b * std::log2(b);
    return s / f0.size();
}

// mean branching factor of the decoding tree: 1 + integral of f over the
// overlapped region [1-2^-r, 2^-r)
inline double expansion_factor(const Spectrum& fi, double r) {
    if (r >= 1.0) return 1.0;
    double lo = 1.0 - std::exp2(-r), hi = std::exp2(-r);
    const int N = fi.size();
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
        double a = static_cast<double>(j) / N, b = static_cast<double>(j + 1) / N;
        double ov = std::min(b, hi) - std::max(a, lo);
        if (ov > 0.0) s += fi.bins[static_cast<std::size_t>(j)] * ov;
    }
    return 1.0 + s;
}

}  // namespace oac
