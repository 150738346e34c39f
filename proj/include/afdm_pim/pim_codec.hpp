// pim_codec.hpp - bits <-> (APM symbols, pre-scaling pattern) for
// pre-chirp index modulation.
//
// Each of the G contiguous groups of n = N/G subcarriers carries
//   b1 = n*log2(M) data bits  -> n Gray-mapped symbols
//   b2 = floor(log2(n!)) index bits -> a permutation of the pre-chirp set S
// in that order. The index bits are the lexicographic rank of the
// permutation; only the first 2^b2 permutations are legal codewords.

#pragma once

#include "afdm_pim/combinatorics.hpp"
#include "afdm_pim/constellation.hpp"
#include "afdm_pim/linalg.hpp"

#include <algorithm>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace afdm_pim {

struct BitBudget {
    unsigned data_bits = 0;   // b1
    unsigned index_bits = 0;  // b2
    unsigned total() const { return data_bits + index_bits; }

    friend bool operator==(const BitBudget&, const BitBudget&) = default;
};

inline BitBudget bits_per_group(unsigned n, unsigned M) {
    if (n == 0) throw std::invalid_argument("bits_per_group: n must be >= 1");
    if (M < 2 || (M & (M - 1)) != 0)
        throw std::invalid_argument("bits_per_group: M=" + std::to_string(M) + " is not a power of two");
    return {n * floor_log2(M), floor_log2(factorial(n))};
}

/// {pi/2, pi, 3pi/2, ...}: n pre-chirp values in steps of pi/2.
inline std::vector<double> half_pi_c2_set(unsigned n) {
    std::vector<double> s(n);
    for (unsigned i = 0; i < n; ++i) s[i] = (i + 1) * std::numbers::pi / 2.0;
    return s;
}

class PimConfig {
public:
    PimConfig(std::size_t N, std::size_t G, unsigned M, std::vector<double> c2_set)
        : N_(N), G_(G), constellation_(M), c2_set_(std::move(c2_set)) {
        if (N == 0 || G == 0 || N % G != 0)
            throw std::invalid_argument("PimConfig: G=" + std::to_string(G) + " does not divide N=" + std::to_string(N));
        n_ = static_cast<unsigned>(N / G);
        if (c2_set_.size() != n_)
            throw std::invalid_argument("PimConfig: pre-chirp set needs n=" + std::to_string(n_) + " values, got " +
                                        std::to_string(c2_set_.size()));
        for (std::size_t i = 0; i < c2_set_.size(); ++i)
            for (std::size_t j = i + 1; j < c2_set_.size(); ++j)
                if (c2_set_[i] == c2_set_[j]) throw std::invalid_argument("PimConfig: pre-chirp values must be distinct");
        budget_ = bits_per_group(n_, M);
    }

    PimConfig(std::size_t N, std::size_t G, unsigned M)
        : PimConfig(N, G, M, half_pi_c2_set(static_cast<unsigned>(G ? N / G : 0))) {}

    std::size_t N() const { return N_; }
    std::size_t G() const { return G_; }
    unsigned n() const { return n_; }
    const Constellation& constellation() const { return constellation_; }
    const std::vector<double>& c2_set() const { return c2_set_; }
    const BitBudget& budget() const { return budget_; }
    std::size_t bits_per_frame() const { return G_ * budget_.total(); }
    /// Legal permutations per group, 2^b2.
    std::uint64_t patterns_per_group() const { return std::uint64_t{1} << budget_.index_bits; }

private:
    std::size_t N_;
    std::size_t G_;
    unsigned n_ = 0;
    Constellation constellation_;
    std::vector<double> c2_set_;
    BitBudget budget_;
};

/// Per-group permutations of the pre-chirp set.
struct PreScalingPattern {
    std::vector<Permutation> groups;

    /// c2[m] = S[sigma_g(m mod n)] for m in group g.
    std::vector<double> expand(const PimConfig& cfg) const {
        if (groups.size() != cfg.G()) throw std::invalid_argument("PreScalingPattern: group count mismatch");
        std::vector<double> c2;
        c2.reserve(cfg.N());
        for (const auto& sigma : groups) {
            if (sigma.size() != cfg.n()) throw std::invalid_argument("PreScalingPattern: permutation length != n");
            for (unsigned j : sigma) c2.push_back(cfg.c2_set().at(j));
        }
        return c2;
    }

    friend bool operator==(const PreScalingPattern&, const PreScalingPattern&) = default;
};

struct GroupPayload {
    Bits data_bits;
    Bits index_bits;
    cvec symbols;
    Permutation psp;

    friend bool operator==(const GroupPayload& a, const GroupPayload& b) {
        return a.data_bits == b.data_bits && a.index_bits == b.index_bits && a.symbols == b.symbols && a.psp == b.psp;
    }
};

inline GroupPayload encode_group(std::span<const std::uint8_t> bits, const PimConfig& cfg) {
    const BitBudget& bb = cfg.budget();
    if (bits.size() != bb.total())
        throw std::invalid_argument("encode_group: expected " + std::to_string(bb.total()) + " bits, got " +
                                    std::to_string(bits.size()));
    const Constellation& con = cfg.constellation();
    const unsigned q = con.bits_per_symbol();

    GroupPayload g;
    g.data_bits.assign(bits.begin(), bits.begin() + bb.data_bits);
    g.index_bits.assign(bits.begin() + bb.data_bits, bits.end());
    g.symbols.resize(cfg.n());
    for (unsigned j = 0; j < cfg.n(); ++j)
        g.symbols[j] = con.map(static_cast<unsigned>(bits_to_word(g.data_bits.data() + j * q, q)));
    g.psp = unrank_permutation(bits_to_word(g.index_bits.data(), g.index_bits.size()), cfg.n());
    return g;
}

/// Inverse of encode_group for hard symbol decisions and a detected
/// permutation. A permutation outside the legal codeword range indicates a
/// detector fault.
inline Bits decode_group(const cvec& symbols_hat, const Permutation& psp_hat, const PimConfig& cfg) {
    if (static_cast<unsigned>(symbols_hat.size()) != cfg.n())
        throw std::invalid_argument("decode_group: expected n symbols");
    const std::uint64_t rank = rank_permutation(psp_hat);
    if (rank >= cfg.patterns_per_group())
        throw std::domain_error("decode_group: permutation rank " + std::to_string(rank) + " is not a legal codeword");
    const Constellation& con = cfg.constellation();
    Bits out;
    out.reserve(cfg.budget().total());
    for (Eigen::Index j = 0; j < symbols_hat.size(); ++j) word_to_bits(con.slice(symbols_hat[j]), con.bits_per_symbol(), out);
    word_to_bits(rank, cfg.budget().index_bits, out);
    return out;
}

struct AssembledFrame {
    cvec x;                 // DAF-domain symbols, length N
    std::vector<double> c2; // per-subcarrier pre-chirp, length N
};

inline AssembledFrame assemble_frame(const std::vector<GroupPayload>& groups, const PimConfig& cfg) {
    if (groups.size() != cfg.G())
        throw std::invalid_argument("assemble_frame: got " + std::to_string(groups.size()) + " groups, expected " +
                                    std::to_string(cfg.G()));
    AssembledFrame f{cvec(static_cast<Eigen::Index>(cfg.N())), {}};
    PreScalingPattern psp;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        f.x.segment(static_cast<Eigen::Index>(g * cfg.n()), cfg.n()) = groups[g].symbols;
        psp.groups.push_back(groups[g].psp);
    }
    f.c2 = psp.expand(cfg);
    return f;
}

/// Recover the per-group payloads from an assembled frame: the permutation
/// is read back by locating each c2 value in the set, bits by slicing.
inline std::vector<GroupPayload> disassemble_frame(const AssembledFrame& f, const PimConfig& cfg) {
    if (static_cast<std::size_t>(f.x.size()) != cfg.N() || f.c2.size() != cfg.N())
        throw std::invalid_argument("disassemble_frame: frame length mismatch");
    std::vector<GroupPayload> out;
    for (std::size_t g = 0; g < cfg.G(); ++g) {
        Permutation sigma(cfg.n());
        for (unsigned j = 0; j < cfg.n(); ++j) {
            const double v = f.c2[g * cfg.n() + j];
            const auto& s = cfg.c2_set();
            const auto it = std::find(s.begin(), s.end(), v);
            if (it == s.end()) throw std::invalid_argument("disassemble_frame: c2 value not in the pre-chirp set");
            sigma[j] = static_cast<unsigned>(it - s.begin());
        }
        const cvec sym = f.x.segment(static_cast<Eigen::Index>(g * cfg.n()), cfg.n());
        out.push_back(encode_group(decode_group(sym, sigma, cfg), cfg));
    }
    return out;
}

/// Split a frame's bits into G groups, encode each and assemble.
inline std::pair<std::vector<GroupPayload>, AssembledFrame> encode_frame(std::span<const std::uint8_t> bits,
                                                                          const PimConfig& cfg) {
    if (bits.size() != cfg.bits_per_frame())
        throw std::invalid_argument("encode_frame: expected " + std::to_string(cfg.bits_per_frame()) + " bits");
    const std::size_t b = cfg.budget().total();
    std::vector<GroupPayload> groups;
    for (std::size_t g = 0; g < cfg.G(); ++g) groups.push_back(encode_group(bits.subspan(g * b, b), cfg));
    AssembledFrame f = assemble_frame(groups, cfg);
    return {std::move(groups), std::move(f)};
}

}  // namespace afdm_pim
