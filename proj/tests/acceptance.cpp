// End-to-end acceptance checks: one pass/fail line per criterion, nonzero
// exit if any fail. Heavier Monte-Carlo checks use fixed seeds so the run is
// deterministic.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oac/arith.hpp"
#include "oac/ccs.hpp"
#include "oac/codec.hpp"
#include "oac/coexist.hpp"
#include "oac/decoder.hpp"
#include "oac/hds.hpp"
#include "oac/sim.hpp"

using namespace oac;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail = "") {
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, name,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string enc(const std::string& block, StreamMode mode) {
    return to_string(arithmetic_encode(bits_from_string(block), BiasProb(1, 3), 8, mode).bits);
}

// --- 1: worked codec table ----------------------------------------------------

bool criterion_table() {
    const std::string p001 = enc("001", StreamMode::Prefix);
    const std::string p100 = enc("100", StreamMode::Prefix);
    bool ok = enc("000", StreamMode::Prefix) == "001" && (p001 == "0101" || p001 == "0110") &&
              enc("010", StreamMode::Prefix) == "1000" && enc("011", StreamMode::Prefix) == "10100" &&
              (p100 == "1011" || p100 == "1100") && enc("101", StreamMode::Prefix) == "11011" &&
              enc("110", StreamMode::Prefix) == "11101" && enc("111", StreamMode::Prefix) == "111110";
    const char* half[8] = {"0", "01", "", "10", "1", "11", "111", "1111"};
    for (int b = 0; b < 8; ++b) {
        std::string blk;
        for (int k = 2; k >= 0; --k) blk += static_cast<char>('0' + ((b >> k) & 1));
        ok = ok && enc(blk, StreamMode::HalfTail) == half[b];
    }
    return ok;
}

// --- 2: round-trip identity -----------------------------------------------------

bool criterion_round_trip() {
    const std::vector<BiasProb> probs = {{1, 3}, {1, 2}, {1, 5}};
    for (const auto& p : probs) {
        for (int n = 1; n <= 12; ++n) {
            for (uint64_t idx = 0; idx < (1ull << n); ++idx) {
                BitVec x = bits_from_index(idx, n);
                for (StreamMode mode : {StreamMode::Prefix, StreamMode::HalfTail}) {
                    Bitstream bs = arithmetic_encode(x, p, 16, mode);
                    if (arithmetic_decode(bs, p, 16, n) != x) return false;
                    if (mode == StreamMode::Prefix) {
                        for (uint64_t tail = 0; tail < 16; ++tail) {
                            Bitstream padded = bs;
                            padded.mode = StreamMode::Raw;
                            BitVec tb = bits_from_index(tail, 4);
                            padded.bits.insert(padded.bits.end(), tb.begin(), tb.end());
                            if (arithmetic_decode(padded, p, 16, n) != x) return false;
                        }
                    }
                }
            }
        }
    }
    return true;
}

// --- 3: coset partition ----------------------------------------------------------

bool criterion_cosets() {
    auto cfg = CodeConfig::tailless(4, {1, 2});
    auto hist = coset_size_histogram(cfg);
    if (hist != std::vector<uint64_t>{1, 4, 7, 4}) return false;
    auto c2 = enumerate_coset(2, cfg);
    std::vector<std::string> got;
    for (const auto& x : c2) got.push_back(to_string(x));
    return got == std::vector<std::string>{"0101", "0110", "0111", "1000", "1001", "1010", "1100"};
}

// --- 4: distance spectrum oracle ------------------------------------------------

bool criterion_hds(std::string& detail) {
    auto small = hds_exhaustive(CodeConfig::tailless(4, {1, 2}));
    if (!(small.psi[0] == 1.0 && small.psi[1] == 1.25 && small.psi[2] == 1.75 &&
          small.psi[3] == 0.75 && small.psi[4] == 0.375)) {
        detail = "n=4 exact values";
        return false;
    }
    auto cfg = CodeConfig::tailless(20, {1, 2});
    auto ex = hds_exhaustive(cfg);
    auto soft = hds_soft(cfg);
    for (int d = 1; d <= 20; ++d) {
        double e = ex.psi[static_cast<std::size_t>(d)];
        double s = soft.psi[static_cast<std::size_t>(d)];
        double rel = (e > 0.0) ? std::abs(s - e) / e : std::abs(s);
        if (rel > 0.05) {
            detail = "soft vs exhaustive at d=" + std::to_string(d) + " rel=" + std::to_string(rel);
            return false;
        }
    }
    double f_half = asymptotic_ccs_half_rate(0.5);
    auto fast = hds_fast(cfg, f_half);
    double f20 = fast.psi[20], e20 = ex.psi[20];
    if (std::abs(f20 - e20) / e20 > 0.15) {
        detail = "fast vs exhaustive at d=20";
        return false;
    }
    if (std::abs(f20 - 0.0017) / 0.0017 > 0.10) {
        detail = "fast at d=20 vs 0.0017, got " + std::to_string(f20);
        return false;
    }
    return true;
}

// --- 5: spectrum recursion convergence -------------------------------------------

double scheme_maxdev(CcsScheme scheme, int N, int steps) {
    Spectrum f = final_ccs(N);
    for (int i = 0; i < steps; ++i) f = ccs_backward_step(f, 0.5, scheme);
    double dev = 0.0;
    for (int j = 0; j < N; ++j) {
        double u = (j + 0.5) / N;
        if (u < 0.05 || u > 0.95) continue;
        dev = std::max(dev, std::abs(f.bins[static_cast<std::size_t>(j)] - asymptotic_ccs_half_rate(u)));
    }
    return dev;
}

bool criterion_ccs(std::string& detail) {
    const int N = 1 << 16;
    Spectrum f = final_ccs(N);
    for (int i = 0; i < 64; ++i) f = ccs_backward_step(f, 0.5, CcsScheme::Fine);
    double dev = 0.0;
    for (int j = 0; j < N; ++j) {
        double u = (j + 0.5) / N;
        if (u < 0.05 || u > 0.95) continue;
        dev = std::max(dev, std::abs(f.bins[static_cast<std::size_t>(j)] - asymptotic_ccs_half_rate(u)));
    }
    if (dev >= 0.01) {
        detail = "maxdev " + std::to_string(dev);
        return false;
    }
    double ecc = ecc_normalized(f);
    if (std::abs(ecc - 1.3047) > 0.003) {
        detail = "squared-density integral " + std::to_string(ecc);
        return false;
    }
    double mu = expansion_factor(f, 0.5);
    if (std::abs(mu - 1.6464) > 0.002) {
        detail = "expansion factor " + std::to_string(mu);
        return false;
    }
    const int Ns = 1 << 12;
    double fine = scheme_maxdev(CcsScheme::Fine, Ns, 64);
    double linear = scheme_maxdev(CcsScheme::Linear, Ns, 64);
    double rounding = scheme_maxdev(CcsScheme::Rounding, Ns, 64);
    if (!(fine <= linear + 1e-12 && linear <= rounding + 1e-12)) {
        detail = "scheme fidelity ordering";
        return false;
    }
    return true;
}

// --- 6: trailing-unknown error rates vs Monte-Carlo ------------------------------

bool criterion_fer_theory(std::string& detail) {
    uint64_t seed = 20;
    for (Rational R : {Rational{1, 2}, Rational{1, 4}}) {
        ExperimentConfig e;
        e.cfg = CodeConfig::tailless(256, R);
        e.eps_list = {0.02, 0.04, 0.08};
        e.trials = 100000;
        e.seed = seed++;
        e.regime = Regime::KnownPrefix;
        double r = e.cfg.r;
        for (int k = 1; k <= 2; ++k) {
            e.known_suffix = k;
            auto rep = run_fer(e);
            for (const auto& pt : rep.points) {
                double theory = (k == 1) ? fer_one_unknown(r, pt.eps) : fer_two_unknown(r, pt.eps);
                if (theory < pt.ci.lo || theory > pt.ci.hi) {
                    char buf[160];
                    std::snprintf(buf, sizeof(buf),
                                  "r=%.2f k=%d eps=%.2f: theory %.5f outside [%.5f, %.5f]", r, k,
                                  pt.eps, theory, pt.ci.lo, pt.ci.hi);
                    detail = buf;
                    return false;
                }
            }
        }
    }
    return true;
}

// --- 7: distance-1/2 closed forms -------------------------------------------------

bool criterion_psi_closed(std::string& detail) {
    for (double r : {0.85, 0.9}) {
        auto soft = hds_soft_from_weights(tailless_weights(64, r), 2);
        double p1 = psi1_closed(r), p2 = psi2_closed(r);
        if (std::abs(p1 - soft.psi[1]) > 1e-6 || std::abs(p2 - soft.psi[2]) > 1e-6) {
            detail = "closed vs truncated sum at r=" + std::to_string(r);
            return false;
        }
        if (std::abs(p2 / p1 - std::exp2(r - 1.0)) > 1e-12) {
            detail = "ratio law at r=" + std::to_string(r);
            return false;
        }
    }
    return true;
}

// --- 8: distance-3 divergence ------------------------------------------------------

bool criterion_psi3(std::string& detail) {
    double golden = std::log2((1.0 + std::sqrt(5.0)) / 2.0);
    auto rep = psi3_divergence(golden, 64);
    bool has11 = false;
    for (auto pr : rep.pairs) has11 = has11 || (pr == std::pair<int, int>{1, 1});
    if (rep.verdict != Convergence::Divergent || !has11) {
        detail = "(1,1) not detected at the golden-ratio rate";
        return false;
    }
    for (int n : {9, 13, 17}) {
        auto soft = hds_soft_from_weights(tailless_weights(n, golden), 3);
        double expect = (n - 1) / 4.0;
        if (std::abs(soft.psi[3] - expect) / expect > 0.05) {
            detail = "linear growth at n=" + std::to_string(n) + ", got " + std::to_string(soft.psi[3]);
            return false;
        }
    }
    double xr = 1.0;
    for (int i = 0; i < 64; ++i) xr = xr - (xr * xr * xr - xr - 1.0) / (3.0 * xr * xr - 1.0);
    auto rep2 = psi3_divergence(std::log2(xr), 64);
    bool has12 = false, has41 = false;
    for (auto pr : rep2.pairs) {
        has12 = has12 || (pr == std::pair<int, int>{1, 2});
        has41 = has41 || (pr == std::pair<int, int>{4, 1});
    }
    if (!has12 || !has41) {
        detail = "(1,2)/(4,1) not detected at the cubic-root rate";
        return false;
    }
    return true;
}

// --- 9: tail effects ----------------------------------------------------------------

bool criterion_tails(std::string& detail) {
    bool killed = false;
    for (int t = 0; t <= 4; ++t) {
        auto h = hds_exhaustive(CodeConfig(12, {1, 2}, t));
        if (h.psi[1] == 0.0) killed = true;
    }
    if (!killed) {
        detail = "no tail t <= 4 removes distance-1 mates";
        return false;
    }
    auto full = hds_exhaustive(CodeConfig(12, {1, 2}, 6));
    for (int d = 1; d <= 12; ++d) {
        double expect = (d <= 6) ? binom(6, d) : 0.0;
        if (std::abs(full.psi[static_cast<std::size_t>(d)] - expect) > 1e-9) {
            detail = "full-length tail spectrum at d=" + std::to_string(d);
            return false;
        }
    }
    ExperimentConfig e;
    e.cfg = CodeConfig::tailless(64, {1, 2});
    e.eps_list = {0.05};
    e.trials = 20000;
    e.seed = 97;
    e.dec.M = 64;
    e.dec.epsilon = 0.05;
    auto reports = tail_sweep(e, {0, 8});
    double f0 = reports[0].points[0].fer;
    double f8 = reports[1].points[0].fer;
    if (!(f8 < f0)) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "FER(t=8)=%.5f !< FER(t=0)=%.5f", f8, f0);
        detail = buf;
        return false;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "FER(t=0)=%.4f FER(t=8)=%.4f", f0, f8);
    detail = buf;
    return true;
}

// --- 10: density-weighted metric benefit ---------------------------------------------

bool criterion_ccs_metric(std::string& detail) {
    ExperimentConfig e;
    e.cfg = CodeConfig::tailless(128, {1, 2});
    e.eps_list = {0.03};
    e.trials = 20000;
    e.seed = 4242;
    e.dec.M = 4;
    e.dec.epsilon = 0.03;
    auto baseline = run_fer(e);

    auto levels = compute_ccs(e.cfg, 4096, CcsScheme::Fine);
    std::vector<Spectrum> spectra(levels.rbegin(), levels.rend());
    e.dec.use_ccs = true;
    e.dec.spectra = &spectra;
    auto aided = run_fer(e);

    double f_plain = baseline.points[0].fer;
    double f_aided = aided.points[0].fer;
    auto pc = compare_paired(baseline.points[0], aided.points[0]);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "FER %.4f -> %.4f, +%llu/-%llu, p=%.2e", f_plain, f_aided,
                  static_cast<unsigned long long>(pc.improvements),
                  static_cast<unsigned long long>(pc.regressions), pc.p_value);
    detail = buf;
    return f_aided <= f_plain && pc.p_value < 0.05;
}

}  // namespace

int main() {
    std::string d;

    report(1, "worked codec table reproduced bit-exactly", criterion_table());
    report(2, "exhaustive encode/decode round trips", criterion_round_trip());
    report(3, "coset partition of the 4-bit half-rate code", criterion_cosets());

    d.clear();
    report(4, "distance spectrum oracle and approximations", criterion_hds(d), d);

    d.clear();
    report(5, "spectrum recursion convergence and functionals", criterion_ccs(d), d);

    d.clear();
    report(6, "trailing-unknown error rates vs Monte-Carlo", criterion_fer_theory(d), d);

    d.clear();
    report(7, "distance-1/2 closed forms vs truncated sums", criterion_psi_closed(d), d);

    d.clear();
    report(8, "distance-3 divergence rates and linear growth", criterion_psi3(d), d);

    d.clear();
    report(9, "tail raises minimum distance and lowers FER", criterion_tails(d), d);

    d.clear();
    report(10, "density-weighted metric lowers FER at small beam width", criterion_ccs_metric(d), d);

    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
