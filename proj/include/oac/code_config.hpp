#pragma once

// Block-level configuration of an overlapped code. The last t symbols (the
// tail) are mapped to non-overlapping half-intervals (rate 1); the body is
// coded at rate r = (nR - t) / (n - t).
//
// Position weights exist in three forms:
//   - binary64, for analysis at small nR (s-values, spectra, shift sums);
//   - exact 64-bit fractions mod 1, for coset decisions at any block length;
//   - Q2.126 projections W_i * 2^{-nR}, for the decoding-tree recursion.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "oac/fixed.hpp"

namespace oac {

struct Rational {
    int64_t num = 1;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n, int64_t d) : num(n), den(d) {
        if (d <= 0 || n < 0) throw std::invalid_argument("rate must be a nonnegative rational");
        int64_t g = std::gcd(n, d);
        if (g > 1) { num /= g; den /= g; }
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            // allow plain integers ("1")
            return Rational(std::stoll(s), 1);
        }
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
};

class CodeConfig {
  public:
    int n = 0;        // block length
    Rational R;       // average rate, nR must be an integer
    int t = 0;        // tail length
    int nR = 0;       // bitstream length in bits
    double r = 0.0;   // body rate
    Rational r_exact; // body rate as a rational

    CodeConfig() = default;
    CodeConfig(int n_, Rational R_, int t_ = 0) : n(n_), R(R_), t(t_) {
        if (n <= 0) throw std::invalid_argument("n must be positive");
        if (R.num <= 0 || R.num > R.den) throw std::invalid_argument("R must be in (0,1]");
        int64_t prod = static_cast<int64_t>(n) * R.num;
        if (prod % R.den != 0) throw std::invalid_argument("nR must be an integer; pick n, R accordingly");
        nR = static_cast<int>(prod / R.den);
        if (nR > 128) throw std::invalid_argument("nR must be <= 128 (precision guard)");
        if (t < 0 || t > nR) throw std::invalid_argument("tail length must be in [0, nR]");
        if (t == n) throw std::invalid_argument("tail cannot cover the whole block");
        r_exact = Rational(nR - t, n - t);
        if (r_exact.den > 64) throw std::invalid_argument("body-rate denominator must be <= 64");
        r = r_exact.value();
        build_weights();
    }

    // Convenience for tailless configs given the body rate directly.
    static CodeConfig tailless(int n, Rational rate) { return CodeConfig(n, rate, 0); }

    // s-value contribution of x_i = 1 (1-based position i).
    double weight(int i) const { return weights_[static_cast<std::size_t>(i - 1)]; }
    const std::vector<double>& weights() const { return weights_; }

    // frac(W_i) * 2^64, exact mod 1
    uint64_t weight_frac64(int i) const { return wfrac64_[static_cast<std::size_t>(i - 1)]; }
    // W_i * 2^{-nR} as Q2.126
    u128 weight_proj(int i) const { return wproj_[static_cast<std::size_t>(i - 1)]; }

    u128 fx_two_r() const { return fx_c2r_; }        // 2^r
    u128 fx_two_neg_r() const { return fx_c2mr_; }   // 2^{-r}
    u128 fx_gap() const { return fx_g_; }            // 2^r - 1

    int body_len() const { return n - t; }

  private:
    std::vector<double> weights_;
    std::vector<uint64_t> wfrac64_;
    std::vector<u128> wproj_;
    u128 fx_c2r_ = 0, fx_c2mr_ = 0, fx_g_ = 0;

    void build_weights() {
        const int nb = n - t;
        const int64_t p = r_exact.num, q = r_exact.den;

        weights_.resize(static_cast<std::size_t>(n));
        double scale = std::ldexp(1.0 - std::exp2(-r), t);  // 2^t (1 - 2^-r)
        for (int i = 1; i <= nb; ++i)
            weights_[static_cast<std::size_t>(i - 1)] = scale * std::exp2(r * (nb + 1 - i));
        for (int k = 1; k <= t; ++k)
            weights_[static_cast<std::size_t>(nb + k - 1)] = std::ldexp(1.0, t - k);

        Pow2Table tab(static_cast<int>(q));

        // Q2.126 rate constants
        if (p == 0) {
            fx_c2r_ = fx_one();
            fx_c2mr_ = fx_one();
            fx_g_ = 0;
        } else if (p == q) {
            fx_c2r_ = fx_one() << 1;
            fx_c2mr_ = fx_one() >> 1;
            fx_g_ = fx_one();
        } else {
            fx_c2r_ = tab.q2_126(static_cast<int>(p));
            fx_c2mr_ = tab.q2_126(static_cast<int>(q - p)) >> 1;
            fx_g_ = fx_c2r_ - fx_one();
        }

        // exact weight fractions: W_i = 2^{e_i} - 2^{e_i - r} with
        // e_i = t + r (nb + 1 - i) for body positions; tail weights integer
        wfrac64_.assign(static_cast<std::size_t>(n), 0);
        for (int i = 1; i <= nb; ++i) {
            if (p == 0) continue;  // zero body weight
            int64_t num_hi = static_cast<int64_t>(t) * q + p * (nb + 1 - i);
            int64_t num_lo = num_hi - p;
            uint64_t hi = tab.frac64_shifted(static_cast<int>(num_hi % q), num_hi / q);
            uint64_t lo = tab.frac64_shifted(static_cast<int>(num_lo % q), num_lo / q);
            wfrac64_[static_cast<std::size_t>(i - 1)] = hi - lo;
        }

        // Q2.126 projections: body a_i = (1 - 2^{-r}) 2^{-r(i-1)}, tail 2^{t-k-nR}
        wproj_.assign(static_cast<std::size_t>(n), 0);
        u128 a = fx_one() - fx_c2mr_;
        for (int i = 1; i <= nb; ++i) {
            wproj_[static_cast<std::size_t>(i - 1)] = a;
            a = fx_mul(a, fx_c2mr_);
        }
        for (int k = 1; k <= t; ++k) {
            int shift = nR - t + k;
            wproj_[static_cast<std::size_t>(nb + k - 1)] = fx_one() >> shift;
        }
    }
};

}  // namespace oac
