#pragma once

// Shift function and coexisting-interval analysis. Flipping the bits of x at
// positions j (current values b) moves the s-value by exactly tau; two
// blocks share a coset only if |tau| < 1.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oac/codec.hpp"

namespace oac {

using IndexSet = std::vector<int>;  // strictly increasing 1-based positions

inline double shift_tau(const IndexSet& j, const BitVec& b, const CodeConfig& cfg) {
    if (j.size() != b.size()) throw std::invalid_argument("index/value length mismatch");
    double tau = 0.0;
    int prev = 0;
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (j[k] <= prev || j[k] > cfg.n) throw std::invalid_argument("positions must be increasing in [1,n]");
        prev = j[k];
        tau += (1.0 - 2.0 * b[k]) * cfg.weight(j[k]);
    }
    return tau;
}

// Trusted oracle: do x and x^z share a coset? (exact s-value comparison)
inline bool coexist_check(const BitVec& x, const BitVec& z, const CodeConfig& cfg) {
    BitVec y = x;
    bool any = false;
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] ^= z[i];
        any |= (z[i] != 0);
    }
    if (!any) throw std::invalid_argument("z must be nonzero");
    return coset_index(x, cfg) == coset_index(y, cfg);
}

// Decoder knows all but the last symbol; error rate of minimum-distance
// decoding over the coset, asymptotic in n.
inline double fer_one_unknown(double r, double eps) {
    if (r <= 0.0 || r >= 1.0 || eps <= 0.0 || eps >= 0.5) throw std::domain_error("need 0<r<1, 0<eps<1/2");
    return (2.0 - std::exp2(r)) * eps;
}

// Components for the two-unknown-ending-symbols case; tau(n,0) = 2^r - 1 and
// tau(n-1,0) = 2^{2r} - 2^r are the shifts of the last two positions.
inline double fer_two_unknown_given_00(double r, double eps) {
    double tau_n = std::exp2(r) - 1.0;
    double tau_n1 = std::exp2(2.0 * r) - std::exp2(r);
    double pos = std::max(0.0, 1.0 - tau_n1);
    return eps * (1.0 - tau_n) + eps * (1.0 - eps) * pos;
}

inline double fer_two_unknown_given_01(double r, double eps) {
    double tau_n1 = std::exp2(2.0 * r) - std::exp2(r);
    double pos = std::max(0.0, 1.0 - tau_n1);
    return eps * (2.0 - tau_n1) - eps * eps * pos;
}

inline double fer_two_unknown(double r, double eps) {
    if (r <= 0.0 || r >= 1.0 || eps <= 0.0 || eps >= 0.5) throw std::domain_error("need 0<r<1, 0<eps<1/2");
    return 0.5 * (fer_two_unknown_given_00(r, eps) + fer_two_unknown_given_01(r, eps));
}

}  // namespace oac
