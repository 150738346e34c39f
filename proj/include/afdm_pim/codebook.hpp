// codebook.hpp - a DAFT-based multicarrier scheme described as a frame-wide
// codebook.
//
// A frame is G contiguous groups. Group g maps its bits, in order, to
//   [alphabet bits | pattern bits]
// where the alphabet bits select one column of the group's symbol alphabet
// (all symbol vectors the group can emit) and the pattern bits select the
// group's pre-chirp values. Schemes without index-modulated chirps have zero
// pattern bits. The joint pattern index k concatenates the per-group pattern
// words, first group most significant.

#pragma once

#include "afdm_pim/linalg.hpp"
#include "afdm_pim/transform.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace afdm_pim {

struct SymbolGroup {
    std::size_t offset = 0;
    std::size_t size = 0;
    unsigned alphabet_bits = 0;
    cmat alphabet;  // size x 2^alphabet_bits
    unsigned pattern_bits = 0;
    std::vector<std::vector<double>> pattern_c2;  // 2^pattern_bits entries of length size
    std::vector<std::uint64_t> pattern_ranks;     // label reported for each pattern (PSP rank)
};

/// A codeword: joint pattern index plus one alphabet column per group.
struct Codeword {
    std::uint64_t pattern = 0;
    std::vector<std::uint64_t> words;

    friend bool operator==(const Codeword&, const Codeword&) = default;
};

class Codebook {
public:
    Codebook(std::string name, std::size_t N, PostChirp c1, std::size_t cp_len, std::vector<SymbolGroup> groups)
        : name_(std::move(name)), N_(N), c1_(c1), cp_len_(cp_len), groups_(std::move(groups)) {
        std::size_t next = 0;
        for (const auto& g : groups_) {
            if (g.offset != next) throw std::invalid_argument("Codebook: groups must tile the subcarriers contiguously");
            next += g.size;
            if (static_cast<std::size_t>(g.alphabet.rows()) != g.size ||
                static_cast<std::uint64_t>(g.alphabet.cols()) != (std::uint64_t{1} << g.alphabet_bits))
                throw std::invalid_argument("Codebook: alphabet shape does not match group size / bit count");
            if (g.pattern_c2.size() != (std::size_t{1} << g.pattern_bits) || g.pattern_ranks.size() != g.pattern_c2.size())
                throw std::invalid_argument("Codebook: pattern table size does not match pattern bits");
            for (const auto& c2 : g.pattern_c2)
                if (c2.size() != g.size) throw std::invalid_argument("Codebook: pattern length != group size");
            bits_ += g.alphabet_bits + g.pattern_bits;
            pattern_bits_ += g.pattern_bits;
        }
        if (next != N_) throw std::invalid_argument("Codebook: groups do not cover N subcarriers");
        if (pattern_bits_ > 24) throw std::invalid_argument("Codebook: too many pre-chirp pattern bits");
        chirp_config(0).validate();
        if (pattern_count() <= kMaxCachedPatterns) {
            daft_cache_.reserve(pattern_count());
            for (std::uint64_t k = 0; k < pattern_count(); ++k) daft_cache_.push_back(daft_matrix(chirp_config(k)));
        }
    }

    const std::string& name() const { return name_; }
    std::size_t N() const { return N_; }
    double c1() const { return c1_.value; }
    std::size_t cp_len() const { return cp_len_; }
    const std::vector<SymbolGroup>& groups() const { return groups_; }
    std::size_t bits_per_frame() const { return bits_; }
    unsigned pattern_bits() const { return pattern_bits_; }
    std::uint64_t pattern_count() const { return std::uint64_t{1} << pattern_bits_; }
    /// Bits per subcarrier use, prefix excluded.
    double spectral_efficiency() const { return static_cast<double>(bits_) / static_cast<double>(N_); }

    /// Per-group pattern words of a joint pattern index.
    std::vector<std::uint64_t> pattern_words(std::uint64_t k) const {
        std::vector<std::uint64_t> w(groups_.size());
        for (std::size_t g = groups_.size(); g-- > 0;) {
            const unsigned pb = groups_[g].pattern_bits;
            w[g] = k & ((std::uint64_t{1} << pb) - 1);
            k >>= pb;
        }
        return w;
    }

    std::vector<double> c2_vector(std::uint64_t k) const {
        if (k >= pattern_count()) throw std::out_of_range("Codebook: pattern index out of range");
        const auto w = pattern_words(k);
        std::vector<double> c2;
        c2.reserve(N_);
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            const auto& v = groups_[g].pattern_c2[w[g]];
            c2.insert(c2.end(), v.begin(), v.end());
        }
        return c2;
    }

    ChirpConfig chirp_config(std::uint64_t k) const { return {N_, c1_.value, c2_vector(k), cp_len_, c1_.exact}; }

    /// DAFT matrix of pattern k; precomputed for small pattern spaces.
    cmat daft_matrix_for(std::uint64_t k) const {
        if (!daft_cache_.empty()) return daft_cache_.at(k);
        return daft_matrix(chirp_config(k));
    }

    cvec symbols(const Codeword& cw) const {
        if (cw.words.size() != groups_.size()) throw std::invalid_argument("Codebook: codeword group count mismatch");
        cvec x(static_cast<Eigen::Index>(N_));
        for (std::size_t g = 0; g < groups_.size(); ++g)
            x.segment(static_cast<Eigen::Index>(groups_[g].offset), static_cast<Eigen::Index>(groups_[g].size)) =
                groups_[g].alphabet.col(static_cast<Eigen::Index>(cw.words[g]));
        return x;
    }

    Codeword split(std::span<const std::uint8_t> bits) const {
        if (bits.size() != bits_)
            throw std::invalid_argument(name_ + ": expected " + std::to_string(bits_) + " bits, got " +
                                        std::to_string(bits.size()));
        Codeword cw;
        std::size_t pos = 0;
        for (const auto& g : groups_) {
            cw.words.push_back(bits_to_word(bits.data() + pos, g.alphabet_bits));
            pos += g.alphabet_bits;
            cw.pattern = (cw.pattern << g.pattern_bits) | bits_to_word(bits.data() + pos, g.pattern_bits);
            pos += g.pattern_bits;
        }
        return cw;
    }

    Bits join(const Codeword& cw) const {
        if (cw.words.size() != groups_.size()) throw std::invalid_argument("Codebook: codeword group count mismatch");
        const auto pw = pattern_words(cw.pattern);
        Bits out;
        out.reserve(bits_);
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            word_to_bits(cw.words[g], groups_[g].alphabet_bits, out);
            word_to_bits(pw[g], groups_[g].pattern_bits, out);
        }
        return out;
    }

    /// Transmit frame body (prefix excluded) of a codeword.
    cvec body(const Codeword& cw) const { return idaft(symbols(cw), chirp_config(cw.pattern)); }

    TimeFrame modulate(std::span<const std::uint8_t> bits) const {
        const Codeword cw = split(bits);
        const ChirpConfig cfg = chirp_config(cw.pattern);
        return append_cpp(idaft(symbols(cw), cfg), cfg);
    }

private:
    static constexpr std::uint64_t kMaxCachedPatterns = 4096;

    std::string name_;
    std::size_t N_;
    PostChirp c1_;
    std::size_t cp_len_;
    std::vector<SymbolGroup> groups_;
    std::size_t bits_ = 0;
    unsigned pattern_bits_ = 0;
    std::vector<cmat> daft_cache_;
};

}  // namespace afdm_pim
