// constellation.hpp - Gray-coded unit-energy APM constellations.

#pragma once

#include "afdm_pim/combinatorics.hpp"
#include "afdm_pim/linalg.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace afdm_pim {

/// M-ary constellation indexed by the Gray-mapped bit word of each symbol.
/// M = 2 is BPSK (0 -> +1), M = 4^k is square QAM, other powers of two PSK.
/// Average symbol energy is 1.
class Constellation {
public:
    explicit Constellation(unsigned M) : M_(M) {
        if (M < 2 || (M & (M - 1)) != 0)
            throw std::invalid_argument("constellation order " + std::to_string(M) + " is not a power of two >= 2");
        bits_ = floor_log2(M);
        points_.resize(M);
        if (M == 2) {
            points_ = {cplx{1.0, 0.0}, cplx{-1.0, 0.0}};
        } else if (bits_ % 2 == 0) {
            build_square_qam();
        } else {
            for (unsigned w = 0; w < M; ++w) points_[w] = std::polar(1.0, kTwoPi * gray_inverse(w) / M);
        }
    }

    unsigned order() const { return M_; }
    unsigned bits_per_symbol() const { return bits_; }
    const std::vector<cplx>& points() const { return points_; }

    cplx map(unsigned word) const { return points_.at(word); }

    /// Index (= bit word) of the nearest point.
    unsigned slice(cplx z) const {
        unsigned best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (unsigned w = 0; w < M_; ++w) {
            const double d = std::norm(z - points_[w]);
            if (d < best_d) best_d = d, best = w;
        }
        return best;
    }

    std::string name() const {
        if (M_ == 2) return "BPSK";
        if (M_ == 4) return "QPSK";
        return std::to_string(M_) + (bits_ % 2 == 0 ? "-QAM" : "-PSK");
    }

private:
    static unsigned gray(unsigned v) { return v ^ (v >> 1); }
    static unsigned gray_inverse(unsigned g) {
        unsigned v = 0;
        for (; g; g >>= 1) v ^= g;
        return v;
    }

    // Each axis is a Gray-coded PAM; high half of the word drives I.
    void build_square_qam() {
        const unsigned half = bits_ / 2;
        const unsigned side = 1u << half;
        const double scale = std::sqrt(2.0 * (side * side - 1) / 3.0);
        auto level = [&](unsigned w) {
            const unsigned pos = gray_inverse(w);
            return (2.0 * pos - (side - 1)) / scale;
        };
        for (unsigned w = 0; w < M_; ++w) {
            const unsigned wi = w >> half, wq = w & (side - 1);
            // Negate so the all-zero word sits in the first quadrant (QPSK: 00 -> (+1+i)/sqrt2).
            points_[w] = {-level(wi), -level(wq)};
        }
    }

    unsigned M_;
    unsigned bits_ = 0;
    std::vector<cplx> points_;
};

}  // namespace afdm_pim
