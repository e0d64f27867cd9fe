#pragma once

// Fixed-point support for large blocks. The s-values and tree projections
// involve factors up to 2^{nR}; binary64 loses the fractional part long
// before n = 256, so coset decisions use exact mod-1 arithmetic on 64-bit
// weight fractions and the decoder tracks projections in Q2.126. The base
// constants 2^{m/q} are computed once per q to 320 fractional bits by integer
// root extraction.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oac {

using u128 = unsigned __int128;

// --- Q2.126: value v stored as round(v * 2^126), v in [0, 4) -----------------

constexpr int kFxFrac = 126;
constexpr u128 fx_one() { return u128(1) << kFxFrac; }

inline u128 fx_mul(u128 a, u128 b) {
    const uint64_t M = ~uint64_t(0);
    uint64_t al = static_cast<uint64_t>(a & M), ah = static_cast<uint64_t>(a >> 64);
    uint64_t bl = static_cast<uint64_t>(b & M), bh = static_cast<uint64_t>(b >> 64);
    u128 ll = u128(al) * bl;
    u128 lh = u128(al) * bh;
    u128 hl = u128(ah) * bl;
    u128 hh = u128(ah) * bh;
    u128 mid = (ll >> 64) + (lh & M) + (hl & M);
    u128 high = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);  // top 128 bits
    u128 low = (mid << 64) | (ll & M);
    return (high << (128 - kFxFrac)) | (low >> kFxFrac);
}

inline double fx_to_double(u128 a) {
    return (static_cast<double>(static_cast<uint64_t>(a >> 64)) * 18446744073709551616.0 +
            static_cast<double>(static_cast<uint64_t>(a))) *
           0x1.0p-126;
}

// --- little-endian bignum, just enough for integer q-th roots ----------------

namespace detail {

using Big = std::vector<uint64_t>;

inline Big big_mul(const Big& a, const Big& b) {
    Big r(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        u128 carry = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            u128 cur = u128(a[i]) * b[j] + r[i + j] + carry;
            r[i + j] = static_cast<uint64_t>(cur);
            carry = cur >> 64;
        }
        r[i + b.size()] += static_cast<uint64_t>(carry);
    }
    while (r.size() > 1 && r.back() == 0) r.pop_back();
    return r;
}

// a <= 2^e ?
inline bool big_le_pow2(const Big& a, long e) {
    long bits = 0;
    for (long i = static_cast<long>(a.size()) - 1; i >= 0; --i) {
        if (a[static_cast<std::size_t>(i)] != 0) {
            uint64_t v = a[static_cast<std::size_t>(i)];
            int top = 63;
            while (!(v >> top)) --top;
            bits = 64 * i + top + 1;
            break;
        }
    }
    if (bits == 0) return true;
    if (bits <= e) return true;
    if (bits > e + 1) return false;
    // same bit length as 2^e: equal only if a is exactly that power of two
    long word = e / 64, bit = e % 64;
    for (long i = 0; i < static_cast<long>(a.size()); ++i) {
        uint64_t want = (i == word && bit < 64) ? (uint64_t(1) << bit) : 0;
        if (a[static_cast<std::size_t>(i)] != want) return false;
    }
    return true;
}

inline Big big_pow(const Big& a, int q) {
    Big r{1};
    for (int i = 0; i < q; ++i) r = big_mul(r, a);
    return r;
}

}  // namespace detail

// Bits of 2^{m/q} in [1,2), with `frac_bits` fractional bits: returns the
// largest Y with Y^q <= 2^{frac_bits*q + m}.
inline detail::Big pow2_root_bits(int m, int q, int frac_bits) {
    if (q < 1 || m < 0 || m >= q) throw std::invalid_argument("need 0 <= m < q");
    long e = static_cast<long>(frac_bits) * q + m;
    int total_bits = frac_bits + 1;  // result in [2^frac_bits, 2^{frac_bits+1})
    detail::Big y(static_cast<std::size_t>((total_bits + 63) / 64), 0);
    for (int bit = total_bits - 1; bit >= 0; --bit) {
        y[static_cast<std::size_t>(bit / 64)] |= uint64_t(1) << (bit % 64);
        if (!detail::big_le_pow2(detail::big_pow(y, q), e))
            y[static_cast<std::size_t>(bit / 64)] &= ~(uint64_t(1) << (bit % 64));
    }
    return y;
}

// High-precision table of 2^{m/q} for m = 0..q-1 (320 fractional bits each).
class Pow2Table {
  public:
    static constexpr int kFracBits = 320;

    explicit Pow2Table(int q) : q_(q) {
        for (int m = 0; m < q; ++m) roots_.push_back(pow2_root_bits(m, q, kFracBits));
    }

    // frac(2^{E + m/q}) * 2^64, exact to the stored precision; E >= 0.
    uint64_t frac64_shifted(int m, long E) const {
        if (E < 0 || E > kFracBits - 64) throw std::out_of_range("exponent beyond table precision");
        // want bits [kFracBits-E-1 : kFracBits-E-64] of the root
        long lo = kFracBits - E - 64;  // position of the lowest wanted bit
        const detail::Big& b = roots_[static_cast<std::size_t>(m)];
        auto bit_at = [&](long pos) -> uint64_t {
            if (pos < 0) return 0;
            std::size_t w = static_cast<std::size_t>(pos / 64);
            if (w >= b.size()) return 0;
            return (b[w] >> (pos % 64)) & 1u;
        };
        // assemble 64 bits starting at lo (little-endian word extraction)
        uint64_t out = 0;
        std::size_t w = static_cast<std::size_t>(lo / 64);
        int off = static_cast<int>(lo % 64);
        auto word = [&](std::size_t i) -> uint64_t { return i < b.size() ? b[i] : 0; };
        if (off == 0) out = word(w);
        else out = (word(w) >> off) | (word(w + 1) << (64 - off));
        // mask integer bits if the window reaches past the binary point
        if (E < 0) return 0;
        (void)bit_at;
        return out;
    }

    // 2^{m/q} as Q2.126 (value in [1,2))
    u128 q2_126(int m) const {
        const detail::Big& b = roots_[static_cast<std::size_t>(m)];
        // top 127 bits of a (kFracBits+1)-bit number, placed at Q2.126
        u128 v = 0;
        for (long bit = kFracBits; bit >= kFracBits - kFxFrac; --bit) {
            std::size_t w = static_cast<std::size_t>(bit / 64);
            uint64_t bv = w < b.size() ? (b[w] >> (bit % 64)) & 1u : 0;
            v = (v << 1) | bv;
        }
        return v;
    }

    int q() const { return q_; }

  private:
    int q_;
    std::vector<detail::Big> roots_;
};

}  // namespace oac
