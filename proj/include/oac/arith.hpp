#pragma once

// Finite-precision binary arithmetic codec on a w-bit sliding window
// [lambda:eta], with explicit underflow handling and two termination modes:
// Prefix streams decode under any appended tail; HalfTail streams decode
// once "10..." is appended (the stream length must then be known).

#include <cstdint>
#include <stdexcept>

#include "oac/bits.hpp"

namespace oac {

// Exact bias probability Pr(X=1) = num/den, 0 < num < den.
struct BiasProb {
    uint64_t num;
    uint64_t den;

    BiasProb(uint64_t n, uint64_t d) : num(n), den(d) {
        if (d == 0 || n == 0 || n >= d) throw std::invalid_argument("bias probability must be in (0,1)");
        if (d > (1ull << 20)) throw std::invalid_argument("bias denominator too large (max 2^20)");
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct SlidingWindow {
    uint64_t lambda = 0;
    uint64_t eta = 0;
    uint64_t upsilon = 0;  // pending underflow bits
    int w = 16;

    explicit SlidingWindow(int width = 16) : w(width) {
        if (width < 4 || width > 30) throw std::invalid_argument("window width must be in [4,30]");
        lambda = 0;
        eta = (1ull << w) - 1;
    }
    uint64_t length() const { return eta - lambda + 1; }
    uint64_t msb(uint64_t v) const { return (v >> (w - 1)) & 1u; }
    uint64_t msb2(uint64_t v) const { return (v >> (w - 2)) & 1u; }
};

struct PrecisionExhausted : std::runtime_error {
    PrecisionExhausted() : std::runtime_error("window degenerated below 4; increase w") {}
};

// Split the current window: the 0-branch keeps the lower round((1-p)*len)
// values. round() is half-up on the exact rational, evaluated in integers.
inline uint64_t zero_branch_width(const BiasProb& p, uint64_t len) {
    uint64_t qn = p.den - p.num;  // numerator of (1-p)
    // floor(((qn*len)/den) + 1/2) = floor((2*qn*len + den) / (2*den))
    return (2 * qn * len + p.den) / (2 * p.den);
}

inline void shrink_window(int x, const BiasProb& p, SlidingWindow& win) {
    uint64_t len = win.length();
    if (len < 4) throw PrecisionExhausted{};
    uint64_t k = zero_branch_width(p, len);
    if (x == 0) win.eta = win.lambda + k - 1;
    else win.lambda = win.lambda + k;
}

// Emit matched leading bits and rescale. Appends 0 to lambda, 1 to eta.
inline void renormalize_window(SlidingWindow& win, BitVec& out) {
    uint64_t mask = (1ull << win.w) - 1;
    while (win.msb(win.lambda) == win.msb(win.eta)) {
        out.push_back(static_cast<uint8_t>(win.msb(win.lambda)));
        win.lambda = (win.lambda << 1) & mask;
        win.eta = ((win.eta << 1) & mask) | 1u;
    }
}

// Drop 2-MSBs while the window straddles the midpoint (2-MSB pattern 1/0),
// counting each drop in upsilon. Keeps the MSBs, shifts the rest left.
inline void remove_underflow_bits(SlidingWindow& win) {
    uint64_t low_mask = (1ull << (win.w - 2)) - 1;
    uint64_t top = 1ull << (win.w - 1);
    while (win.msb2(win.lambda) == 1 && win.msb2(win.eta) == 0) {
        win.lambda = (win.msb(win.lambda) ? top : 0) | ((win.lambda & low_mask) << 1);
        win.eta = (win.msb(win.eta) ? top : 0) | ((win.eta & low_mask) << 1) | 1u;
        ++win.upsilon;
    }
}

// Emit the (matched) MSB followed by upsilon complements, then shift the
// window once (0 appended to lambda, 1 to eta).
inline void push_underflow_bits(SlidingWindow& win, BitVec& out) {
    uint8_t b = static_cast<uint8_t>(win.msb(win.lambda));
    out.push_back(b);
    for (uint64_t i = 0; i < win.upsilon; ++i) out.push_back(static_cast<uint8_t>(1 - b));
    win.upsilon = 0;
    uint64_t mask = (1ull << win.w) - 1;
    win.lambda = (win.lambda << 1) & mask;
    win.eta = ((win.eta << 1) & mask) | 1u;
}

inline void encode_one_symbol(int x, const BiasProb& p, SlidingWindow& win, BitVec& out) {
    shrink_window(x, p, win);
    if (win.msb(win.lambda) == win.msb(win.eta)) {
        push_underflow_bits(win, out);
        renormalize_window(win, out);
    }
    // runs whenever the window straddles the midpoint, even with no emission
    remove_underflow_bits(win);
}

// Terminate so the stream decodes under any tail: one disambiguating bit,
// the pending underflow complements, and one closing bit.
inline void end_bitstream(SlidingWindow& win, BitVec& out) {
    uint64_t l2 = win.msb2(win.lambda), e2 = win.msb2(win.eta);
    uint8_t b;
    if (l2 == 0 && e2 == 0) b = 0;
    else if (l2 == 1 && e2 == 1) b = 1;
    else b = 0;  // straddling case: both terminations work; pick (0,1...1,1)
    out.push_back(b);
    for (uint64_t i = 0; i < win.upsilon; ++i) out.push_back(static_cast<uint8_t>(1 - b));
    out.push_back(static_cast<uint8_t>(1 - b));
    win.upsilon = 0;
}

inline Bitstream arithmetic_encode(const BitVec& x, const BiasProb& p, int w, StreamMode mode) {
    if (x.empty()) throw std::invalid_argument("empty block");
    if (mode == StreamMode::Raw) throw std::invalid_argument("encoder emits Prefix or HalfTail streams");
    SlidingWindow win(w);
    Bitstream bs;
    bs.mode = mode;
    for (uint8_t xi : x) encode_one_symbol(xi, p, win, bs.bits);
    if (mode == StreamMode::Prefix) end_bitstream(win, bs.bits);
    // HalfTail: stop after the body; the decoder appends "10...".
    return bs;
}

// Mirror decoder: maintains the same window state plus a w-bit value
// register fed from the stream, applying identical transformations.
inline BitVec arithmetic_decode(const Bitstream& bs, const BiasProb& p, int w, int n) {
    SlidingWindow win(w);
    BitVec x;
    x.reserve(static_cast<std::size_t>(n));

    std::size_t pos = 0;
    // HalfTail streams are completed with "1" then zeros; Prefix (and Raw)
    // streams tolerate any tail, zeros used here.
    auto next_bit = [&]() -> uint64_t {
        if (pos < bs.bits.size()) return bs.bits[pos++];
        if (bs.mode == StreamMode::HalfTail && pos == bs.bits.size()) { ++pos; return 1; }
        ++pos;
        return 0;
    };

    uint64_t value = 0;
    for (int i = 0; i < w; ++i) value = (value << 1) | next_bit();

    uint64_t mask = (1ull << w) - 1;
    uint64_t top = 1ull << (w - 1);
    uint64_t low_mask = (1ull << (w - 2)) - 1;

    for (int i = 0; i < n; ++i) {
        uint64_t len = win.length();
        if (len < 4) throw PrecisionExhausted{};
        uint64_t split = win.lambda + zero_branch_width(p, len);
        int xi = (value < split) ? 0 : 1;
        x.push_back(static_cast<uint8_t>(xi));

        if (xi == 0) win.eta = split - 1;
        else win.lambda = split;

        if (win.msb(win.lambda) == win.msb(win.eta)) {
            // counterpart of push_underflow_bits: a single shift
            win.lambda = (win.lambda << 1) & mask;
            win.eta = ((win.eta << 1) & mask) | 1u;
            value = ((value << 1) & mask) | next_bit();
            // renormalize
            while (win.msb(win.lambda) == win.msb(win.eta)) {
                win.lambda = (win.lambda << 1) & mask;
                win.eta = ((win.eta << 1) & mask) | 1u;
                value = ((value << 1) & mask) | next_bit();
            }
        }
        // remove underflow bits: drop 2-MSBs, keep MSBs
        while (win.msb2(win.lambda) == 1 && win.msb2(win.eta) == 0) {
            win.lambda = (win.msb(win.lambda) ? top : 0) | ((win.lambda & low_mask) << 1);
            win.eta = (win.msb(win.eta) ? top : 0) | ((win.eta & low_mask) << 1) | 1u;
            value = (win.msb(value) ? top : 0) | ((value & low_mask) << 1) | next_bit();
        }
    }
    return x;
}

// Length of the shortest bitstream that pins the infinite-precision mapping
// interval of x under bias p: m = -floor(log2(h-l)), computed exactly.
inline int raw_stream_length(const BitVec& x, const BiasProb& p) {
    // h-l = num^k * (den-num)^(n-k) / den^n with k = popcount(x)
    unsigned __int128 num = 1, den = 1;
    for (uint8_t b : x) {
        num *= (b ? p.num : p.den - p.num);
        den *= p.den;
        // keep the fraction reduced enough to avoid overflow at n <= 16
        while ((num & 1) == 0 && (den & 1) == 0) { num >>= 1; den >>= 1; }
    }
    int m = 0;
    // smallest m with num * 2^m >= den
    while (num < den) { num <<= 1; ++m; }
    return m;
}

}  // namespace oac
