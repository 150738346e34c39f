// combinatorics.hpp - lexicographic ranking of permutations (Lehmer code)
// and of k-subsets.

#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace afdm_pim {

using Permutation = std::vector<unsigned>;

inline std::uint64_t factorial(unsigned n) {
    if (n > 20) throw std::overflow_error("factorial: n > 20 overflows 64 bits");
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

inline std::uint64_t binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (unsigned i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

/// floor(log2(v)) for v >= 1.
inline unsigned floor_log2(std::uint64_t v) {
    unsigned r = 0;
    while (v >>= 1) ++r;
    return r;
}

inline bool is_permutation_of_iota(const Permutation& p) {
    std::vector<bool> seen(p.size(), false);
    for (unsigned v : p) {
        if (v >= p.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

/// Lexicographic rank of a permutation of {0..n-1}.
inline std::uint64_t rank_permutation(const Permutation& p) {
    if (!is_permutation_of_iota(p)) throw std::invalid_argument("rank_permutation: not a bijection on {0..n-1}");
    const auto n = static_cast<unsigned>(p.size());
    std::uint64_t rank = 0;
    for (unsigned i = 0; i < n; ++i) {
        // Lehmer digit: how many later entries are smaller.
        unsigned smaller = 0;
        for (unsigned j = i + 1; j < n; ++j) smaller += p[j] < p[i];
        rank = rank * (n - i) + smaller;
    }
    return rank;
}

inline Permutation unrank_permutation(std::uint64_t rank, unsigned n) {
    if (rank >= factorial(n))
        throw std::out_of_range("unrank_permutation: rank " + std::to_string(rank) + " >= " + std::to_string(n) + "!");
    std::vector<unsigned> digits(n);
    for (unsigned i = n; i-- > 0;) {
        const unsigned radix = n - i;
        digits[i] = static_cast<unsigned>(rank % radix);
        rank /= radix;
    }
    std::vector<unsigned> pool(n);
    for (unsigned i = 0; i < n; ++i) pool[i] = i;
    Permutation p(n);
    for (unsigned i = 0; i < n; ++i) {
        p[i] = pool[digits[i]];
        pool.erase(pool.begin() + digits[i]);
    }
    return p;
}

/// Lexicographic rank of a sorted k-subset of {0..n-1}:
/// {0,1,2} < {0,1,3} < {0,2,3} < {1,2,3} for (n,k) = (4,3).
inline std::uint64_t rank_subset(const std::vector<unsigned>& subset, unsigned n) {
    const auto k = static_cast<unsigned>(subset.size());
    for (unsigned i = 0; i < k; ++i)
        if (subset[i] >= n || (i > 0 && subset[i] <= subset[i - 1]))
            throw std::invalid_argument("rank_subset: not a sorted subset of {0..n-1}");
    std::uint64_t rank = 0;
    unsigned next = 0;
    for (unsigned i = 0; i < k; ++i) {
        // Count subsets that agree up to i-1 and put a smaller value at i.
        for (unsigned v = next; v < subset[i]; ++v) rank += binomial(n - v - 1, k - i - 1);
        next = subset[i] + 1;
    }
    return rank;
}

inline std::vector<unsigned> unrank_subset(std::uint64_t rank, unsigned n, unsigned k) {
    if (k > n || rank >= binomial(n, k)) throw std::out_of_range("unrank_subset: rank out of range");
    std::vector<unsigned> subset;
    unsigned v = 0;
    for (unsigned i = 0; i < k; ++i) {
        for (;; ++v) {
            const std::uint64_t block = binomial(n - v - 1, k - i - 1);
            if (rank < block) break;
            rank -= block;
        }
        subset.push_back(v++);
    }
    return subset;
}

}  // namespace afdm_pim
