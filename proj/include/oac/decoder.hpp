#pragma once

// Beam-search decoder over the incomplete coset tree. Paths carry the
// projection u of the remaining bitstream interval; branching multiplies the
// window by 2^r and is legal only while u stays in [0,1). Projections are
// tracked in Q2.126: the recursion amplifies input error by 2^{ri}, which
// binary64 cannot absorb for large blocks. Metrics combine the channel
// likelihood with an optional density correction from the coset cardinality
// spectrum.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "oac/ccs.hpp"
#include "oac/codec.hpp"

namespace oac {

struct PathNode {
    int depth = 0;
    BitVec block;            // decoded prefix, block[k] holds x_{k+1}
    u128 u = 0;              // projection in [0,1), Q2.126
    double metric = 0.0;     // accumulated log-likelihood

    double u_real() const { return fx_to_double(u); }
};

struct DecoderConfig {
    int M = 1;               // beam width
    bool use_ccs = false;
    double epsilon = 0.05;
    const std::vector<Spectrum>* spectra = nullptr;  // index = level (0..n) when use_ccs

    void validate(const CodeConfig& cfg) const {
        if (M < 1) throw std::invalid_argument("beam width must be >= 1");
        if (epsilon <= 0.0 || epsilon >= 0.5) throw std::invalid_argument("epsilon must be in (0, 1/2)");
        if (use_ccs && (spectra == nullptr || static_cast<int>(spectra->size()) != cfg.n + 1))
            throw std::invalid_argument("ccs metric requires spectra for all levels");
    }
};

namespace detail {
constexpr double kLogFloor = -60.0;  // stand-in for log of an empty bin

inline double log_floor(double f) {
    if (f <= 0.0) return kLogFloor;
    return std::max(std::log(f), kLogFloor);
}

inline double level_log_f(const DecoderConfig& dec, int depth, double u) {
    return log_floor((*dec.spectra)[static_cast<std::size_t>(depth)].at_u(u));
}
}  // namespace detail

// One level of the projection recursion; tail levels run at rate 1.
inline std::optional<PathNode> branch(const PathNode& node, int x, const CodeConfig& cfg) {
    if (node.depth >= cfg.n) throw std::logic_error("cannot branch past the block end");
    using i128 = __int128;
    const i128 one = static_cast<i128>(fx_one());
    int next = node.depth + 1;
    i128 v;
    if (next > cfg.body_len()) {
        v = (static_cast<i128>(node.u) << 1) - (x ? one : 0);
    } else {
        v = static_cast<i128>(fx_mul(node.u, cfg.fx_two_r())) - (x ? static_cast<i128>(cfg.fx_gap()) : 0);
    }
    // Same snap margin as the coset boundary. The interval is half-open:
    // u = 0 (s-value exactly on its own coset ceiling) is a legal member,
    // u = 1 (exactly on the previous coset's ceiling) is not.
    const i128 tol = one >> 40;
    if (v < -tol || v >= one - tol) return std::nullopt;
    if (v < 0) v = 0;
    PathNode child;
    child.depth = next;
    child.block = node.block;
    child.block.push_back(static_cast<uint8_t>(x));
    child.u = static_cast<u128>(v);
    child.metric = node.metric;  // caller adds the increment
    return child;
}

inline double path_metric_increment(int x, int y, double u_new, double u_old, int depth,
                                    const DecoderConfig& dec) {
    double inc = (x == y) ? std::log(1.0 - dec.epsilon) : std::log(dec.epsilon);
    if (dec.use_ccs)
        inc += detail::level_log_f(dec, depth, u_new) - detail::level_log_f(dec, depth - 1, u_old);
    return inc;
}

namespace detail {

inline PathNode root_from_u0(u128 u0) {
    PathNode root;
    root.u = u0;
    return root;
}

inline PathNode root_from_index(int64_t m, const CodeConfig& cfg) {
    if (cfg.nR > 62) throw std::invalid_argument("index-based decoding limited to nR <= 62; use a root projection");
    if (m < 0 || m >= (int64_t(1) << cfg.nR)) throw std::invalid_argument("coset index out of range");
    return root_from_u0(static_cast<u128>(m) << (kFxFrac - cfg.nR));
}

inline void grow(const PathNode& parent, int y_bit, const CodeConfig& cfg, const DecoderConfig& dec,
                 std::vector<PathNode>& out) {
    double u_old = dec.use_ccs ? parent.u_real() : 0.0;
    for (int x = 0; x <= 1; ++x) {
        auto child = branch(parent, x, cfg);
        if (!child) continue;
        child->metric += path_metric_increment(x, y_bit, dec.use_ccs ? child->u_real() : 0.0, u_old,
                                               child->depth, dec);
        out.push_back(*child);
    }
}

inline const PathNode& best_full_path(const std::vector<PathNode>& full) {
    const PathNode* best = &full.front();
    for (const PathNode& p : full) {
        if (p.metric > best->metric + 1e-12 ||
            (std::abs(p.metric - best->metric) <= 1e-12 && p.block < best->block))
            best = &p;
    }
    return *best;
}

// Breadth-first beam search: at each level expand every survivor, then keep
// the M best.
inline BitVec m_algorithm_impl(PathNode root, const BitVec& y, const CodeConfig& cfg,
                               const DecoderConfig& dec) {
    std::vector<PathNode> paths{root};
    std::vector<PathNode> next;
    for (int i = 1; i <= cfg.n; ++i) {
        next.clear();
        for (const PathNode& p : paths) grow(p, y[static_cast<std::size_t>(i - 1)], cfg, dec, next);
        if (next.empty()) throw std::runtime_error("no legal path survives (corrupt coset index?)");
        std::stable_sort(next.begin(), next.end(),
                         [](const PathNode& a, const PathNode& b) { return a.metric > b.metric; });
        if (static_cast<int>(next.size()) > dec.M) next.resize(static_cast<std::size_t>(dec.M));
        paths.swap(next);
    }
    return best_full_path(paths).block;
}

// Memory-capped variant: the level list is a fixed block of M cells expanded
// in place, best metric first. A path's first child overwrites its own cell;
// a second child is written backward from the end of the block, replacing the
// worst not-yet-expanded path outright. When the backward pointer reaches the
// cell being expanded there is no room left, so only the better child is
// kept. Childless paths leave holes that vanish at the next sort.
inline BitVec backward_replacing_impl(PathNode root, const BitVec& y, const CodeConfig& cfg,
                                      const DecoderConfig& dec) {
    const std::size_t M = static_cast<std::size_t>(dec.M);
    std::vector<PathNode> survivors{root};
    std::vector<PathNode> arena(M);
    std::vector<uint8_t> filled(M);
    std::vector<PathNode> children;

    for (int i = 1; i <= cfg.n; ++i) {
        int y_bit = y[static_cast<std::size_t>(i - 1)];
        std::stable_sort(survivors.begin(), survivors.end(),
                         [](const PathNode& a, const PathNode& b) { return a.metric > b.metric; });
        if (survivors.size() > M) survivors.resize(M);

        std::fill(filled.begin(), filled.end(), uint8_t{0});
        std::size_t back = M;  // one past the last free cell for second children
        for (std::size_t p = 0; p < survivors.size() && p < back; ++p) {
            children.clear();
            grow(survivors[p], y_bit, cfg, dec, children);
            if (children.empty()) continue;
            if (children.size() == 2 && back - 1 <= p) {
                // no room for both: keep the better child (ties keep the 0-branch)
                if (children[1].metric > children[0].metric) children[0] = children[1];
                children.resize(1);
            }
            arena[p] = children[0];
            filled[p] = 1;
            if (children.size() == 2) {
                --back;
                arena[back] = children[1];
                filled[back] = 1;
            }
        }
        survivors.clear();
        for (std::size_t c = 0; c < M; ++c)
            if (filled[c]) survivors.push_back(arena[c]);
        if (survivors.empty()) throw std::runtime_error("no legal path survives (corrupt coset index?)");
    }
    std::stable_sort(survivors.begin(), survivors.end(),
                     [](const PathNode& a, const PathNode& b) { return a.metric > b.metric; });
    return best_full_path(survivors).block;
}

}  // namespace detail

inline BitVec decode_m_algorithm(int64_t m, const BitVec& y, const CodeConfig& cfg,
                                 const DecoderConfig& dec) {
    if (static_cast<int>(y.size()) != cfg.n) throw std::invalid_argument("side-information length mismatch");
    dec.validate(cfg);
    return detail::m_algorithm_impl(detail::root_from_index(m, cfg), y, cfg, dec);
}

inline BitVec decode_backward_replacing(int64_t m, const BitVec& y, const CodeConfig& cfg,
                                        const DecoderConfig& dec) {
    if (static_cast<int>(y.size()) != cfg.n) throw std::invalid_argument("side-information length mismatch");
    dec.validate(cfg);
    return detail::backward_replacing_impl(detail::root_from_index(m, cfg), y, cfg, dec);
}

// Entry points keyed by the root projection u_0 = m 2^{-nR} (Q2.126) rather
// than the coset index itself; required once nR exceeds 62 bits.
inline BitVec decode_m_algorithm_u0(u128 u0, const BitVec& y, const CodeConfig& cfg,
                                    const DecoderConfig& dec) {
    if (static_cast<int>(y.size()) != cfg.n) throw std::invalid_argument("side-information length mismatch");
    dec.validate(cfg);
    return detail::m_algorithm_impl(detail::root_from_u0(u0), y, cfg, dec);
}

inline BitVec decode_backward_replacing_u0(u128 u0, const BitVec& y, const CodeConfig& cfg,
                                           const DecoderConfig& dec) {
    if (static_cast<int>(y.size()) != cfg.n) throw std::invalid_argument("side-information length mismatch");
    dec.validate(cfg);
    return detail::backward_replacing_impl(detail::root_from_u0(u0), y, cfg, dec);
}

}  // namespace oac
