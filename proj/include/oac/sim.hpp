#pragma once

// Monte-Carlo harness: binary-symmetric side information, frame error rate
// measurement, tail sweeps, paired comparisons. Every trial draws from its
// own counter-derived stream, so results are bit-identical regardless of
// thread count and paired runs share noise.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "oac/decoder.hpp"

namespace oac {

// --- deterministic per-trial randomness --------------------------------------

struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t s) : state(s) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [0,1)
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    int next_bit() { return static_cast<int>(next() >> 63); }
};

inline SplitMix64 trial_stream(uint64_t seed, uint64_t trial) {
    SplitMix64 h(seed);
    uint64_t a = h.next();
    SplitMix64 g(a ^ (trial * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
    return SplitMix64(g.next());
}

inline BitVec random_block(SplitMix64& rng, int n) {
    BitVec x(static_cast<std::size_t>(n));
    for (auto& b : x) b = static_cast<uint8_t>(rng.next_bit());
    return x;
}

inline BitVec bsc_corrupt(const BitVec& x, double eps, SplitMix64& rng) {
    if (eps < 0.0 || eps >= 0.5) throw std::domain_error("crossover probability must be in [0, 1/2)");
    BitVec y = x;
    for (auto& b : y)
        if (rng.next_unit() < eps) b ^= 1;
    return y;
}

// --- experiment configuration -------------------------------------------------

enum class Regime { Full, KnownPrefix };
enum class DecodeAlgo { MAlgorithm, BackwardReplacing };

struct ExperimentConfig {
    CodeConfig cfg;
    std::vector<double> eps_list;
    uint64_t trials = 10000;
    uint64_t seed = 1;
    DecoderConfig dec;
    Regime regime = Regime::Full;
    int known_suffix = 1;  // k: unknown ending symbols when regime == KnownPrefix
    DecodeAlgo algo = DecodeAlgo::MAlgorithm;
    int threads = 0;  // 0: hardware default

    void validate() const {
        if (trials < 1) throw std::invalid_argument("need at least one trial");
        if (eps_list.empty()) throw std::invalid_argument("need at least one crossover probability");
        for (double e : eps_list)
            if (e <= 0.0 || e >= 0.5) throw std::invalid_argument("crossover probabilities must be in (0, 1/2)");
        if (regime == Regime::KnownPrefix && (known_suffix < 1 || known_suffix > std::min(cfg.n, 20)))
            throw std::invalid_argument("known-prefix regime supports 1..min(n,20) unknown symbols");
    }
};

struct WilsonInterval {
    double lo = 0.0, hi = 0.0;
};

inline WilsonInterval wilson95(uint64_t errors, uint64_t trials) {
    const double z = 1.959963984540054;
    double n = static_cast<double>(trials);
    double p = static_cast<double>(errors) / n;
    double z2n = z * z / n;
    double center = (p + z2n / 2.0) / (1.0 + z2n);
    double half = z * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n)) / (1.0 + z2n);
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct FerPoint {
    double eps = 0.0;
    uint64_t errors = 0;
    uint64_t decode_failures = 0;  // no surviving path (counted as errors too)
    uint64_t trials = 0;
    double fer = 0.0;
    WilsonInterval ci;
    std::vector<uint8_t> outcomes;  // per-trial error flags, for paired tests
};

struct FerReport {
    std::vector<FerPoint> points;
    uint64_t seed = 0;
    double wall_seconds = 0.0;
};

// --- trial bodies -------------------------------------------------------------

namespace detail {

// Exact maximum-likelihood decoding when all but the last k symbols are
// revealed: try every suffix consistent with the coset, keep the minimum
// Hamming distance to y, break exact ties with a fair coin. Candidates share
// the block prefix, so coset equality reduces to comparing the ceilings of
// (prefix fraction + small suffix weight sums); the huge integer part of the
// s-value cancels and never has to be computed.
inline bool known_prefix_trial_error(const BitVec& x, const BitVec& y, int k,
                                     const CodeConfig& cfg, SplitMix64& rng) {
    const int n = cfg.n;
    uint64_t prefix_frac = 0;
    for (int i = 1; i <= n - k; ++i)
        if (x[static_cast<std::size_t>(i - 1)]) prefix_frac += cfg.weight_frac64(i);
    const double fr = static_cast<double>(prefix_frac) * 0x1.0p-64;

    auto suffix_ceil = [&](uint64_t suf) {
        double tail = 0.0;
        for (int i = 0; i < k; ++i)
            if ((suf >> (k - 1 - i)) & 1) tail += cfg.weight(n - k + i + 1);
        return static_cast<long>(std::ceil(fr + tail));
    };
    uint64_t x_suf = 0;
    for (int i = 0; i < k; ++i) x_suf = (x_suf << 1) | x[static_cast<std::size_t>(n - k + i)];
    const long target = suffix_ceil(x_suf);

    int best_dist = n + 1;
    int ties = 0;
    bool best_is_x = false;
    for (uint64_t suf = 0; suf < (1ull << k); ++suf) {
        if (suffix_ceil(suf) != target) continue;
        int dist = 0;
        for (int i = 0; i < k; ++i)
            dist += (((suf >> (k - 1 - i)) & 1) != y[static_cast<std::size_t>(n - k + i)]);
        if (dist < best_dist) {
            best_dist = dist;
            ties = 1;
            best_is_x = (suf == x_suf);
        } else if (dist == best_dist) {
            // reservoir choice keeps each tied candidate equally likely
            ++ties;
            if (rng.next_unit() * ties < 1.0) best_is_x = (suf == x_suf);
        }
    }
    return !best_is_x;
}

struct TrialResult {
    bool error = false;
    bool failure = false;
};

inline TrialResult run_one_trial(const ExperimentConfig& exp, double eps, uint64_t trial) {
    SplitMix64 rng = trial_stream(exp.seed, trial);
    BitVec x = random_block(rng, exp.cfg.n);
    BitVec y = bsc_corrupt(x, eps, rng);
    TrialResult res;
    if (exp.regime == Regime::KnownPrefix) {
        res.error = known_prefix_trial_error(x, y, exp.known_suffix, exp.cfg, rng);
        return res;
    }
    try {
        u128 u0 = u0_fixed(x, exp.cfg);
        BitVec xh = (exp.algo == DecodeAlgo::MAlgorithm)
                        ? decode_m_algorithm_u0(u0, y, exp.cfg, exp.dec)
                        : decode_backward_replacing_u0(u0, y, exp.cfg, exp.dec);
        res.error = (xh != x);
    } catch (const std::runtime_error&) {
        res.error = true;
        res.failure = true;
    }
    return res;
}

}  // namespace detail

inline FerReport run_fer(const ExperimentConfig& exp) {
    exp.validate();
    auto t0 = std::chrono::steady_clock::now();
    unsigned nthreads = exp.threads > 0 ? static_cast<unsigned>(exp.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    FerReport rep;
    rep.seed = exp.seed;
    for (double eps : exp.eps_list) {
        FerPoint pt;
        pt.eps = eps;
        pt.trials = exp.trials;
        pt.outcomes.assign(exp.trials, 0);
        std::vector<uint64_t> failures(nthreads, 0);
        auto worker = [&](unsigned w) {
            for (uint64_t t = w; t < exp.trials; t += nthreads) {
                auto r = detail::run_one_trial(exp, eps, t);
                pt.outcomes[t] = r.error ? 1 : 0;
                if (r.failure) ++failures[w];
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < nthreads; ++w) pool.emplace_back(worker, w);
        worker(0);
        for (auto& th : pool) th.join();
        for (uint8_t o : pt.outcomes) pt.errors += o;
        for (uint64_t f : failures) pt.decode_failures += f;
        pt.fer = static_cast<double>(pt.errors) / static_cast<double>(pt.trials);
        pt.ci = wilson95(pt.errors, pt.trials);
        rep.points.push_back(std::move(pt));
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// FER per tail length with shared trial streams (same source and noise at
// equal trial index) for variance-reduced comparison.
inline std::vector<FerReport> tail_sweep(const ExperimentConfig& base, const std::vector<int>& t_list) {
    std::vector<FerReport> out;
    for (int t : t_list) {
        ExperimentConfig e = base;
        e.cfg = CodeConfig(base.cfg.n, base.cfg.R, t);
        std::vector<Spectrum> spectra;
        if (e.dec.use_ccs) {
            // level densities depend on the tail length, so rebuild per t
            auto levels = compute_ccs(e.cfg, 1 << 12, CcsScheme::Fine);
            spectra.assign(levels.rbegin(), levels.rend());
            e.dec.spectra = &spectra;
        }
        out.push_back(run_fer(e));
    }
    return out;
}

// One-sided McNemar test (continuity-corrected normal approximation) that the
// variant beats the baseline: small p means the improvement count b is too
// large to be chance given regressions c.
inline double mcnemar_one_sided_p(uint64_t b, uint64_t c) {
    if (b + c == 0) return 1.0;
    double z = (static_cast<double>(b) - static_cast<double>(c) - 1.0) /
               std::sqrt(static_cast<double>(b + c));
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

struct PairedComparison {
    uint64_t improvements = 0;  // baseline error, variant correct
    uint64_t regressions = 0;   // variant error, baseline correct
    double p_value = 1.0;
};

inline PairedComparison compare_paired(const FerPoint& baseline, const FerPoint& variant) {
    if (baseline.outcomes.size() != variant.outcomes.size())
        throw std::invalid_argument("paired comparison needs equal trial counts");
    PairedComparison pc;
    for (std::size_t i = 0; i < baseline.outcomes.size(); ++i) {
        if (baseline.outcomes[i] && !variant.outcomes[i]) ++pc.improvements;
        if (!baseline.outcomes[i] && variant.outcomes[i]) ++pc.regressions;
    }
    pc.p_value = mcnemar_one_sided_p(pc.improvements, pc.regressions);
    return pc;
}

}  // namespace oac
