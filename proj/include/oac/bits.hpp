#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace oac {

// A block of bits, MSB-first. Element values are 0 or 1.
using BitVec = std::vector<uint8_t>;

enum class StreamMode : uint8_t { Raw = 0, Prefix = 1, HalfTail = 2 };

struct Bitstream {
    BitVec bits;
    StreamMode mode = StreamMode::Raw;

    std::size_t length() const { return bits.size(); }
};

inline std::string to_string(const BitVec& v) {
    std::string s;
    s.reserve(v.size());
    for (uint8_t b : v) s.push_back(b ? '1' : '0');
    return s;
}

inline BitVec bits_from_string(const std::string& s) {
    BitVec v;
    v.reserve(s.size());
    for (char c : s) {
        if (c == '0') v.push_back(0);
        else if (c == '1') v.push_back(1);
        else throw std::invalid_argument("bit string may contain only 0/1");
    }
    return v;
}

// The i-th block (LSB of `idx` is the last bit) of length n; handy for
// exhaustive loops that want lexicographic order to match integer order.
inline BitVec bits_from_index(uint64_t idx, int n) {
    BitVec v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[n - 1 - i] = static_cast<uint8_t>((idx >> i) & 1u);
    return v;
}

inline uint64_t index_from_bits(const BitVec& v) {
    uint64_t idx = 0;
    for (uint8_t b : v) idx = (idx << 1) | b;
    return idx;
}

// Serialized form: magic "OACB", u8 mode, u8 window width, u32 bit count
// (big-endian), then the bits packed MSB-first, zero-padded to a byte.
inline std::vector<uint8_t> serialize(const Bitstream& bs, int w) {
    std::vector<uint8_t> out = {'O', 'A', 'C', 'B'};
    out.push_back(static_cast<uint8_t>(bs.mode));
    out.push_back(static_cast<uint8_t>(w));
    uint32_t nbits = static_cast<uint32_t>(bs.bits.size());
    for (int sh = 24; sh >= 0; sh -= 8) out.push_back(static_cast<uint8_t>((nbits >> sh) & 0xFF));
    uint8_t acc = 0;
    int filled = 0;
    for (uint8_t b : bs.bits) {
        acc = static_cast<uint8_t>((acc << 1) | b);
        if (++filled == 8) { out.push_back(acc); acc = 0; filled = 0; }
    }
    if (filled > 0) out.push_back(static_cast<uint8_t>(acc << (8 - filled)));
    return out;
}

struct ParsedStream {
    Bitstream stream;
    int w = 0;
};

inline ParsedStream deserialize(const std::vector<uint8_t>& raw) {
    if (raw.size() < 10 || raw[0] != 'O' || raw[1] != 'A' || raw[2] != 'C' || raw[3] != 'B')
        throw std::invalid_argument("bad stream header");
    ParsedStream p;
    p.stream.mode = static_cast<StreamMode>(raw[4]);
    p.w = raw[5];
    uint32_t nbits = 0;
    for (int i = 6; i < 10; ++i) nbits = (nbits << 8) | raw[static_cast<std::size_t>(i)];
    if (raw.size() < 10 + (nbits + 7) / 8) throw std::invalid_argument("truncated stream");
    p.stream.bits.reserve(nbits);
    for (uint32_t i = 0; i < nbits; ++i) {
        uint8_t byte = raw[10 + i / 8];
        p.stream.bits.push_back(static_cast<uint8_t>((byte >> (7 - i % 8)) & 1u));
    }
    return p;
}

}  // namespace oac
