#pragma once

// Infinite-precision model of the overlapped encoder: s-values, coset
// indices, and exhaustive coset enumeration.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "oac/bits.hpp"
#include "oac/code_config.hpp"

namespace oac {

// Values like s = 1.0 sit exactly on the half-open boundary (m-1, m]; snap
// float noise onto the integer before taking the ceiling.
inline double snap_to_integer(double s) {
    double nearest = std::round(s);
    if (std::abs(s - nearest) < std::ldexp(std::max(1.0, std::abs(s)), -40)) return nearest;
    return s;
}

inline double s_value(const BitVec& x, const CodeConfig& cfg) {
    if (static_cast<int>(x.size()) != cfg.n) throw std::invalid_argument("block length mismatch");
    double s = 0.0;
    for (int i = 0; i < cfg.n; ++i)
        if (x[static_cast<std::size_t>(i)]) s += cfg.weights()[static_cast<std::size_t>(i)];
    return s;
}

inline int64_t coset_index(const BitVec& x, const CodeConfig& cfg) {
    return static_cast<int64_t>(std::ceil(snap_to_integer(s_value(x, cfg))));
}

namespace detail {
inline void check_enumerable(const CodeConfig& cfg) {
    if (cfg.n > 24) throw std::length_error("exhaustive enumeration capped at n <= 24");
}
}  // namespace detail

// All blocks in coset m, lexicographic order.
inline std::vector<BitVec> enumerate_coset(int64_t m, const CodeConfig& cfg) {
    detail::check_enumerable(cfg);
    std::vector<BitVec> out;
    uint64_t total = 1ull << cfg.n;
    for (uint64_t idx = 0; idx < total; ++idx) {
        BitVec x = bits_from_index(idx, cfg.n);
        if (coset_index(x, cfg) == m) out.push_back(std::move(x));
    }
    return out;
}

// frac(s(x)) * 2^64, exact mod 1 (valid at any block length, unlike the
// binary64 s-value whose fraction washes out once nR outgrows the mantissa).
inline uint64_t coset_frac64(const BitVec& x, const CodeConfig& cfg) {
    if (static_cast<int>(x.size()) != cfg.n) throw std::invalid_argument("block length mismatch");
    uint64_t f = 0;
    for (int i = 1; i <= cfg.n; ++i)
        if (x[static_cast<std::size_t>(i - 1)]) f += cfg.weight_frac64(i);
    return f;
}

// Root projection u_0 = ceil(s(x)) * 2^{-nR} as Q2.126, computed as
// l(x) + (ceil(s) - s) 2^{-nR} so the huge integer part of s never appears.
inline u128 u0_fixed(const BitVec& x, const CodeConfig& cfg) {
    if (static_cast<int>(x.size()) != cfg.n) throw std::invalid_argument("block length mismatch");
    u128 u = 0;
    for (int i = 1; i <= cfg.n; ++i)
        if (x[static_cast<std::size_t>(i - 1)]) u += cfg.weight_proj(i);
    uint64_t theta64 = 0 - coset_frac64(x, cfg);  // (ceil(s) - s) * 2^64
    int shift = kFxFrac - 64 - cfg.nR;
    u128 theta = (shift >= 0) ? (u128(theta64) << shift) : (u128(theta64) >> (-shift));
    return u + theta;
}

inline std::vector<uint64_t> coset_size_histogram(const CodeConfig& cfg) {
    detail::check_enumerable(cfg);
    std::vector<uint64_t> hist(static_cast<std::size_t>(1) << cfg.nR, 0);
    uint64_t total = 1ull << cfg.n;
    for (uint64_t idx = 0; idx < total; ++idx) {
        BitVec x = bits_from_index(idx, cfg.n);
        ++hist[static_cast<std::size_t>(coset_index(x, cfg))];
    }
    return hist;
}

}  // namespace oac
