// schemes.hpp - codebooks for AFDM-PIM and the reference schemes
// (classic AFDM, OFDM, OFDM with subcarrier-activation IM).
//
// Every scheme is a DAFT codebook: OFDM is the c1 = c2 = 0 case, whose CPP
// is a plain cyclic prefix.

#pragma once

#include "afdm_pim/codebook.hpp"
#include "afdm_pim/combinatorics.hpp"
#include "afdm_pim/constellation.hpp"
#include "afdm_pim/pim_codec.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace afdm_pim {

enum class SchemeKind { AfdmPim, Afdm, Ofdm, OfdmIm };

inline std::string to_string(SchemeKind k) {
    switch (k) {
        case SchemeKind::AfdmPim: return "afdm-pim";
        case SchemeKind::Afdm: return "afdm";
        case SchemeKind::Ofdm: return "ofdm";
        case SchemeKind::OfdmIm: return "ofdm-im";
    }
    return "?";
}

inline SchemeKind scheme_from_string(const std::string& s) {
    if (s == "afdm-pim") return SchemeKind::AfdmPim;
    if (s == "afdm") return SchemeKind::Afdm;
    if (s == "ofdm") return SchemeKind::Ofdm;
    if (s == "ofdm-im") return SchemeKind::OfdmIm;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected afdm-pim|afdm|ofdm|ofdm-im)");
}

namespace detail {

// All M^size symbol vectors of a plain APM group, column index = bit word.
inline cmat apm_alphabet(std::size_t size, const Constellation& con) {
    const unsigned q = con.bits_per_symbol();
    const std::uint64_t count = std::uint64_t{1} << (q * size);
    cmat a(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(count));
    for (std::uint64_t w = 0; w < count; ++w)
        for (std::size_t j = 0; j < size; ++j) {
            const auto shift = static_cast<unsigned>(q * (size - 1 - j));
            a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(w)) =
                con.map(static_cast<unsigned>((w >> shift) & ((1u << q) - 1)));
        }
    return a;
}

inline std::vector<SymbolGroup> fixed_chirp_groups(std::size_t N, std::size_t G, unsigned M, double c2) {
    if (G == 0 || N % G != 0) throw std::invalid_argument("group count must divide N");
    const Constellation con(M);
    const std::size_t n = N / G;
    std::vector<SymbolGroup> groups;
    for (std::size_t g = 0; g < G; ++g) {
        SymbolGroup sg;
        sg.offset = g * n;
        sg.size = n;
        sg.alphabet_bits = static_cast<unsigned>(n * con.bits_per_symbol());
        sg.alphabet = apm_alphabet(n, con);
        sg.pattern_c2 = {std::vector<double>(n, c2)};
        sg.pattern_ranks = {0};
        groups.push_back(std::move(sg));
    }
    return groups;
}

}  // namespace detail

/// AFDM-PIM: each group carries b1 data bits on its symbols and b2 index bits
/// in the permutation of the pre-chirp set.
inline Codebook make_afdm_pim_codebook(const PimConfig& cfg, PostChirp c1, std::size_t cp_len) {
    const BitBudget& bb = cfg.budget();
    const unsigned n = cfg.n();
    std::vector<SymbolGroup> groups;
    for (std::size_t g = 0; g < cfg.G(); ++g) {
        SymbolGroup sg;
        sg.offset = g * n;
        sg.size = n;
        sg.alphabet_bits = bb.data_bits;
        sg.alphabet = detail::apm_alphabet(n, cfg.constellation());
        sg.pattern_bits = bb.index_bits;
        for (std::uint64_t r = 0; r < cfg.patterns_per_group(); ++r) {
            std::vector<double> c2;
            for (unsigned j : unrank_permutation(r, n)) c2.push_back(cfg.c2_set()[j]);
            sg.pattern_c2.push_back(std::move(c2));
            sg.pattern_ranks.push_back(r);
        }
        groups.push_back(std::move(sg));
    }
    return Codebook("afdm-pim", cfg.N(), c1, cp_len, std::move(groups));
}

/// Classic AFDM: one shared pre-chirp on every subcarrier. G only sets the
/// detector's enumeration blocks; the waveform does not depend on it.
inline Codebook make_afdm_codebook(std::size_t N, std::size_t G, unsigned M, double c2, PostChirp c1, std::size_t cp_len) {
    return Codebook("afdm", N, c1, cp_len, detail::fixed_chirp_groups(N, G, M, c2));
}

/// CP-OFDM with a unitary DFT.
inline Codebook make_ofdm_codebook(std::size_t N, std::size_t G, unsigned M, std::size_t cp_len) {
    return Codebook("ofdm", N, 0.0, cp_len, detail::fixed_chirp_groups(N, G, M, 0.0));
}

/// OFDM-IM: per group of n_im subcarriers, floor(log2 C(n_im, k_im)) index
/// bits pick the active subset (lexicographic k-subset rank), followed by
/// k_im symbols scaled by sqrt(n_im/k_im) to keep unit average energy.
inline Codebook make_ofdm_im_codebook(std::size_t N, unsigned n_im, unsigned k_im, unsigned M, std::size_t cp_len) {
    if (n_im == 0 || N % n_im != 0) throw std::invalid_argument("OFDM-IM: group size must divide N");
    if (k_im == 0 || k_im > n_im) throw std::invalid_argument("OFDM-IM: need 1 <= k_im <= n_im");
    const Constellation con(M);
    const unsigned q = con.bits_per_symbol();
    const unsigned index_bits = floor_log2(binomial(n_im, k_im));
    const unsigned data_bits = k_im * q;
    const double scale = std::sqrt(static_cast<double>(n_im) / k_im);
    const std::uint64_t count = std::uint64_t{1} << (index_bits + data_bits);

    cmat alphabet = cmat::Zero(n_im, static_cast<Eigen::Index>(count));
    for (std::uint64_t w = 0; w < count; ++w) {
        const auto active = unrank_subset(w >> data_bits, n_im, k_im);
        for (unsigned j = 0; j < k_im; ++j) {
            const unsigned shift = q * (k_im - 1 - j);
            const auto sym = static_cast<unsigned>((w >> shift) & ((1u << q) - 1));
            alphabet(active[j], static_cast<Eigen::Index>(w)) = scale * con.map(sym);
        }
    }

    std::vector<SymbolGroup> groups;
    for (std::size_t g = 0; g < N / n_im; ++g) {
        SymbolGroup sg;
        sg.offset = g * n_im;
        sg.size = n_im;
        sg.alphabet_bits = index_bits + data_bits;
        sg.alphabet = alphabet;
        sg.pattern_c2 = {std::vector<double>(n_im, 0.0)};
        sg.pattern_ranks = {0};
        groups.push_back(std::move(sg));
    }
    return Codebook("ofdm-im", N, 0.0, cp_len, std::move(groups));
}

}  // namespace afdm_pim
