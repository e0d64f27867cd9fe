#pragma once

// Hamming distance spectrum psi(d;n): expected number of same-coset mates at
// distance d. Five routes: exhaustive count, binomial / soft / hard / fast
// approximations, closed forms for d = 1,2, and detection of the rates at
// which psi(3;n) grows without bound.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "oac/codec.hpp"

namespace oac {

struct HdsVector {
    std::vector<double> psi;  // psi[d], d = 0..n
    std::string method;
    std::vector<uint8_t> valid;  // per-d flag (budget-limited methods)

    double operator[](std::size_t d) const { return psi[d]; }
};

// --- exhaustive ------------------------------------------------------------

namespace detail {
inline std::vector<std::vector<uint32_t>> cosets_by_index(const CodeConfig& cfg) {
    if (cfg.n > 20) throw std::length_error("exhaustive spectrum capped at n <= 20");
    std::vector<std::vector<uint32_t>> buckets(static_cast<std::size_t>(1) << cfg.nR);
    uint64_t total = 1ull << cfg.n;
    for (uint64_t idx = 0; idx < total; ++idx) {
        double s = 0.0;
        uint64_t v = idx;
        while (v) {
            int bitpos = std::countr_zero(v);        // position from block end
            s += cfg.weight(cfg.n - bitpos);
            v &= v - 1;
        }
        int64_t m = static_cast<int64_t>(std::ceil(snap_to_integer(s)));
        buckets[static_cast<std::size_t>(m)].push_back(static_cast<uint32_t>(idx));
    }
    return buckets;
}
}  // namespace detail

inline HdsVector hds_exhaustive(const CodeConfig& cfg) {
    auto buckets = detail::cosets_by_index(cfg);
    std::vector<uint64_t> counts(static_cast<std::size_t>(cfg.n) + 1, 0);  // ordered pairs per d
    for (const auto& coset : buckets) {
        for (std::size_t a = 0; a < coset.size(); ++a)
            for (std::size_t b = a + 1; b < coset.size(); ++b)
                counts[static_cast<std::size_t>(std::popcount(coset[a] ^ coset[b]))] += 2;
    }
    HdsVector h;
    h.method = "exhaustive";
    h.psi.assign(static_cast<std::size_t>(cfg.n) + 1, 0.0);
    h.valid.assign(h.psi.size(), 1);
    h.psi[0] = 1.0;
    double scale = std::ldexp(1.0, -cfg.n);
    for (int d = 1; d <= cfg.n; ++d) h.psi[static_cast<std::size_t>(d)] = counts[static_cast<std::size_t>(d)] * scale;
    return h;
}

// Per-coset spectrum phi_m(d): mean number of d-away mates for members of
// coset m.
inline std::vector<double> coset_hds(int64_t m, const CodeConfig& cfg) {
    auto members = enumerate_coset(m, cfg);
    std::vector<double> phi(static_cast<std::size_t>(cfg.n) + 1, 0.0);
    phi[0] = 1.0;
    if (members.empty()) return phi;
    std::vector<uint32_t> idx;
    idx.reserve(members.size());
    for (const auto& x : members) idx.push_back(static_cast<uint32_t>(index_from_bits(x)));
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b)
            phi[static_cast<std::size_t>(std::popcount(idx[a] ^ idx[b]))] += 2.0;
    for (int d = 1; d <= cfg.n; ++d) phi[static_cast<std::size_t>(d)] /= static_cast<double>(idx.size());
    return phi;
}

// --- approximations ---------------------------------------------------------

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

// psi[d] = C(n,d) 2^{-nR} * integral of f0^2
inline HdsVector hds_binomial(const CodeConfig& cfg, double f_sq_integral) {
    HdsVector h;
    h.method = "binomial";
    h.psi.assign(static_cast<std::size_t>(cfg.n) + 1, 0.0);
    h.valid.assign(h.psi.size(), 1);
    double base = std::ldexp(f_sq_integral, -cfg.nR);
    for (int d = 0; d <= cfg.n; ++d) h.psi[static_cast<std::size_t>(d)] = binom(cfg.n, d) * base;
    return h;
}

namespace detail {

// Accumulate, over all sign patterns w in {0,+1,-1}^n with support size
// d <= d_max, soft[d] += (1-|tau|)^+ and hard[d] += 1{|tau| < 1}, where tau
// is the weighted signed sum. Suffix weight sums allow pruning branches that
// can no longer return below |tau| = 1.
struct TernaryScan {
    const std::vector<double>& w;
    std::vector<double> suffix;  // suffix[i] = sum of w[i..]
    std::vector<double> soft, hard;
    int n, d_max;

    TernaryScan(const std::vector<double>& weights, int d_max_)
        : w(weights), n(static_cast<int>(weights.size())), d_max(d_max_) {
        suffix.assign(static_cast<std::size_t>(n) + 1, 0.0);
        for (int i = n - 1; i >= 0; --i) suffix[static_cast<std::size_t>(i)] = suffix[static_cast<std::size_t>(i) + 1] + w[static_cast<std::size_t>(i)];
        soft.assign(static_cast<std::size_t>(n) + 1, 0.0);
        hard.assign(static_cast<std::size_t>(n) + 1, 0.0);
        recurse(0, 0, 0.0);
    }

    void recurse(int i, int d, double tau) {
        if (std::abs(tau) - suffix[static_cast<std::size_t>(i)] >= 1.0) return;  // dead branch
        if (i == n) {
            if (d == 0) return;
            double a = std::abs(tau);
            if (a < 1.0) {
                soft[static_cast<std::size_t>(d)] += 1.0 - a;
                hard[static_cast<std::size_t>(d)] += 1.0;
            }
            return;
        }
        recurse(i + 1, d, tau);
        if (d < d_max) {
            recurse(i + 1, d + 1, tau + w[static_cast<std::size_t>(i)]);
            recurse(i + 1, d + 1, tau - w[static_cast<std::size_t>(i)]);
        }
    }
};

inline void budget_check(const CodeConfig& cfg, int d_max) {
    double work = 0.0;
    for (int d = 1; d <= d_max; ++d) work += binom(cfg.n, d) * std::ldexp(1.0, d);
    if (work > std::ldexp(1.0, 34)) throw std::length_error("spectrum enumeration exceeds 2^34 term budget");
}

}  // namespace detail

// psi[d] = 2^{alpha-d} * sum over supports of (1 - |tau|)^+, alpha = 1{d=n}
inline HdsVector hds_soft(const CodeConfig& cfg, int d_max = -1) {
    if (d_max < 0 || d_max > cfg.n) d_max = cfg.n;
    detail::budget_check(cfg, d_max);
    detail::TernaryScan scan(cfg.weights(), d_max);
    HdsVector h;
    h.method = "soft";
    h.psi.assign(static_cast<std::size_t>(cfg.n) + 1, 0.0);
    h.valid.assign(h.psi.size(), 0);
    h.psi[0] = 1.0;
    h.valid[0] = 1;
    for (int d = 1; d <= d_max; ++d) {
        int alpha = (d == cfg.n) ? 1 : 0;
        h.psi[static_cast<std::size_t>(d)] = std::ldexp(scan.soft[static_cast<std::size_t>(d)], alpha - d);
        h.valid[static_cast<std::size_t>(d)] = 1;
    }
    return h;
}

// Same sum from explicit position weights; supports irrational body rates
// that a CodeConfig cannot carry (weights w_i = (1-2^-r) 2^{r(n+1-i)}).
inline HdsVector hds_soft_from_weights(const std::vector<double>& w, int d_max) {
    const int n = static_cast<int>(w.size());
    if (n < 1) throw std::invalid_argument("need at least one weight");
    if (d_max < 1 || d_max > n) throw std::invalid_argument("d_max out of range");
    double work = 0.0;
    for (int d = 1; d <= d_max; ++d) work += binom(n, d) * std::ldexp(1.0, d);
    if (work > std::ldexp(1.0, 34)) throw std::length_error("spectrum enumeration exceeds 2^34 term budget");
    detail::TernaryScan scan(w, d_max);
    HdsVector h;
    h.method = "soft";
    h.psi.assign(static_cast<std::size_t>(n) + 1, 0.0);
    h.valid.assign(h.psi.size(), 0);
    h.psi[0] = 1.0;
    h.valid[0] = 1;
    for (int d = 1; d <= d_max; ++d) {
        int alpha = (d == n) ? 1 : 0;
        h.psi[static_cast<std::size_t>(d)] = std::ldexp(scan.soft[static_cast<std::size_t>(d)], alpha - d);
        h.valid[static_cast<std::size_t>(d)] = 1;
    }
    return h;
}

// Tailless position weights at an arbitrary real body rate.
inline std::vector<double> tailless_weights(int n, double r) {
    if (n < 1 || r <= 0.0 || r > 1.0) throw std::invalid_argument("need n >= 1 and 0 < r <= 1");
    std::vector<double> w(static_cast<std::size_t>(n));
    double scale = 1.0 - std::exp2(-r);
    for (int i = 1; i <= n; ++i) w[static_cast<std::size_t>(i - 1)] = scale * std::exp2(r * (n + 1 - i));
    return w;
}

// psi[d] = 2^{alpha-d-1} * #supports with |tau| < 1
inline HdsVector hds_hard(const CodeConfig& cfg, int d_max = -1) {
    if (d_max < 0 || d_max > cfg.n) d_max = cfg.n;
    detail::budget_check(cfg, d_max);
    detail::TernaryScan scan(cfg.weights(), d_max);
    HdsVector h;
    h.method = "hard";
    h.psi.assign(static_cast<std::size_t>(cfg.n) + 1, 0.0);
    h.valid.assign(h.psi.size(), 0);
    h.psi[0] = 1.0;
    h.valid[0] = 1;
    for (int d = 1; d <= d_max; ++d) {
        int alpha = (d == cfg.n) ? 1 : 0;
        h.psi[static_cast<std::size_t>(d)] = std::ldexp(scan.hard[static_cast<std::size_t>(d)], alpha - d - 1);
        h.valid[static_cast<std::size_t>(d)] = 1;
    }
    return h;
}

// psi[d] = C(n,d) 2^{alpha-nR-1} f(1/2); f(1/2) from the closed form at
// r = 1/2, else from a converged numerical spectrum.
inline HdsVector hds_fast(const CodeConfig& cfg, double f_at_half) {
    HdsVector h;
    h.method = "fast";
    h.psi.assign(static_cast<std::size_t>(cfg.n) + 1, 0.0);
    h.valid.assign(h.psi.size(), 1);
    h.psi[0] = 1.0;
    for (int d = 1; d <= cfg.n; ++d) {
        int alpha = (d == cfg.n) ? 1 : 0;
        h.psi[static_cast<std::size_t>(d)] = binom(cfg.n, d) * std::ldexp(f_at_half, alpha - cfg.nR - 1);
    }
    return h;
}

// --- closed forms (n -> infinity, tailless) ----------------------------------

inline double psi1_closed(double r) {
    if (r <= 0.0 || r > 1.0) throw std::domain_error("need 0 < r <= 1");
    double x = std::exp2(r) - 1.0;
    long J1 = -static_cast<long>(std::floor(std::log2(x) / r));
    double q = 1.0 - std::exp2(-r);
    double sum = 0.0;
    for (long i = 1; i <= J1; ++i) sum += 1.0 - q * std::exp2(r * static_cast<double>(i));
    return sum;
}

inline double psi2_closed(double r) {
    if (r <= 0.0 || r > 1.0) throw std::domain_error("need 0 < r <= 1");
    double q = 1.0 - std::exp2(-r);
    double log_x = std::log2(std::exp2(r) - 1.0);
    const double guard = 1e-12;  // keeps exact boundaries from rounding off by one

    long J21 = -static_cast<long>(std::floor(std::log2(std::exp2(2.0 * r) - 1.0) / r));
    if (J21 < 0) J21 = 0;
    double p00 = 0.0;
    for (long i = 1; i <= J21; ++i) {
        double arg = std::exp2(-r * static_cast<double>(i)) - 1.0 + std::exp2(-r);
        if (arg <= 0.0) continue;
        long k1 = static_cast<long>(std::ceil((std::log2(arg) - log_x) / r - guard));
        for (long k = 1; k <= k1; ++k)
            p00 += 1.0 - q * std::exp2(r * static_cast<double>(i)) * (std::exp2(r * static_cast<double>(k)) + 1.0);
    }

    long J22 = -static_cast<long>(std::floor(2.0 * log_x / r));
    double p10 = 0.0;
    for (long i = 1; i <= J22; ++i) {
        double arg = std::exp2(-r * static_cast<double>(i)) + 1.0 - std::exp2(-r);
        long k2 = static_cast<long>(std::ceil((std::log2(arg) - log_x) / r - guard));
        for (long k = 1; k <= k2; ++k)
            p10 += 1.0 - q * std::exp2(r * static_cast<double>(i)) * (std::exp2(r * static_cast<double>(k)) - 1.0);
    }
    return 0.5 * (p00 + p10);
}

// --- psi(3) divergence -------------------------------------------------------

enum class Convergence { UnknownUpToBound, Divergent };

struct DivergenceReport {
    std::vector<std::pair<int, int>> pairs;  // (i,j) with 2^{ir}(2^{jr}-1) = 1
    Convergence verdict = Convergence::UnknownUpToBound;
    int bound = 0;
};

// psi(3;n) grows linearly in n iff some integers i,j >= 1 satisfy
// 2^{ir}(2^{jr}-1) = 1; search the grid up to i+j <= bound.
inline DivergenceReport psi3_divergence(double r, int bound = 64) {
    DivergenceReport rep;
    rep.bound = bound;
    for (int i = 1; i < bound; ++i) {
        for (int j = 1; i + j <= bound; ++j) {
            double v = std::exp2(r * i) * (std::exp2(r * j) - 1.0);
            if (std::abs(v - 1.0) < 1e-12) rep.pairs.emplace_back(i, j);
        }
    }
    if (!rep.pairs.empty()) rep.verdict = Convergence::Divergent;
    return rep;
}

enum class DivergentCase { GoldenRatio, CubicRoot };

// Closed forms of the linearly growing psi(3;n) at the two special rates:
// 2^r the golden ratio, or 2^r the real root of x^3 - x - 1.
inline double psi3_divergent_closed(DivergentCase c, int n) {
    if (c == DivergentCase::GoldenRatio) {
        if (n < 5) throw std::domain_error("golden-ratio form valid for n >= 5");
        return (n - 1) / 4.0;
    }
    if (n < 14) throw std::domain_error("cubic-root form valid for n >= 14");
    // real root of x^3 - x - 1 (plastic number)
    double x = 1.0;
    for (int it = 0; it < 64; ++it) x = x - (x * x * x - x - 1.0) / (3.0 * x * x - 1.0);
    return (-12.0 * x * x - 17.0 * x + 79.0) / 4.0 + n / 2.0;
}

// --- integer-rounded shift histogram ----------------------------------------

// counts[x + (2^{nR}-1)] = number of (support, values) pairs at distance d
// whose shift rounds (away from zero) to x.
inline std::vector<uint64_t> shift_histogram(const CodeConfig& cfg, int d) {
    if (d < 1 || d > cfg.n) throw std::invalid_argument("d out of range");
    double work = binom(cfg.n, d) * std::ldexp(1.0, d);
    if (work > std::ldexp(1.0, 34)) throw std::length_error("shift histogram exceeds 2^34 term budget");
    int64_t span = (1ll << cfg.nR) - 1;
    std::vector<uint64_t> counts(static_cast<std::size_t>(2 * span + 1), 0);

    // enumerate supports (combinations), then sign patterns
    std::vector<double> w(static_cast<std::size_t>(d));
    auto rec_signs = [&](auto&& self, int k, double tau) -> void {
        if (k == d) {
            double t = (tau >= 0 ? std::ceil(tau) : -std::ceil(-tau));
            int64_t x = static_cast<int64_t>(t);
            counts[static_cast<std::size_t>(x + span)] += 1;
            return;
        }
        self(self, k + 1, tau + w[static_cast<std::size_t>(k)]);
        self(self, k + 1, tau - w[static_cast<std::size_t>(k)]);
    };
    auto rec_comb = [&](auto&& self, int start, int k) -> void {
        if (k == d) {
            rec_signs(rec_signs, 0, 0.0);
            return;
        }
        for (int i = start; i <= cfg.n - (d - k) + 1; ++i) {
            w[static_cast<std::size_t>(k)] = cfg.weight(i);
            self(self, i + 1, k + 1);
        }
    };
    rec_comb(rec_comb, 1, 0);
    return counts;
}

}  // namespace oac
