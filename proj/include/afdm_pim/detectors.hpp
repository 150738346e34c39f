// detectors.hpp - joint (symbols, pre-chirp pattern) detection with perfect
// channel knowledge.
//
// For every pattern candidate k the receiver forms y_k = D_k r and
// H_eff(k) = D_k H D_k^H.
//   ML:       argmin over (k, x) of |y_k - H_eff(k) x|^2
//   ML-MMSE:  per k, x_hat = H^H (H H^H + I/gamma)^{-1} y_k, slice, score
//             |y_k - H_eff(k) slice(x_hat)|^2, keep the best k.
// Ties resolve to the lowest (pattern, symbol word) in lexicographic order.

#pragma once

#include "afdm_pim/codebook.hpp"
#include "afdm_pim/linalg.hpp"

#include <Eigen/Cholesky>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace afdm_pim {

/// Thrown when an exhaustive search would exceed the configured size bound.
class SizeGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DetectorKind { Ml, MlMmse };

inline std::string to_string(DetectorKind d) { return d == DetectorKind::Ml ? "ml" : "ml-mmse"; }

inline DetectorKind detector_from_string(const std::string& s) {
    if (s == "ml") return DetectorKind::Ml;
    if (s == "ml-mmse") return DetectorKind::MlMmse;
    throw std::invalid_argument("unknown detector '" + s + "' (expected ml|ml-mmse)");
}

struct DetectorOptions {
    /// ML refuses frames with more than this many bits; ML-MMSE applies it to
    /// the pattern bits only.
    unsigned max_search_bits = 24;
    /// ML-MMSE scores the hard-sliced symbols; false scores the soft MMSE
    /// output directly.
    bool score_sliced = true;
};

struct DetectionResult {
    Codeword codeword;
    std::vector<std::uint64_t> psp_ranks;  // per group
    cvec symbols;                          // hard decisions, length N
    Bits bits;
    double residual = std::numeric_limits<double>::infinity();
};

namespace detail {

inline DetectionResult finish(const Codebook& cb, Codeword cw, double residual) {
    DetectionResult res;
    const auto pw = cb.pattern_words(cw.pattern);
    for (std::size_t g = 0; g < pw.size(); ++g) res.psp_ranks.push_back(cb.groups()[g].pattern_ranks[pw[g]]);
    res.symbols = cb.symbols(cw);
    res.bits = cb.join(cw);
    res.codeword = std::move(cw);
    res.residual = residual;
    return res;
}

inline void check_inputs(const Codebook& cb, const cvec& r, const cmat& H) {
    const auto n = static_cast<Eigen::Index>(cb.N());
    if (r.size() != n || H.rows() != n || H.cols() != n)
        throw std::invalid_argument("detector: received vector / channel matrix do not match N");
}

// Sum of group contributions over a half of the groups, one column per
// joint alphabet index of that half (first group most significant).
inline cmat half_contributions(const Codebook& cb, const cmat& Heff, std::size_t g_begin, std::size_t g_end) {
    cmat acc = cmat::Zero(Heff.rows(), 1);
    for (std::size_t g = g_begin; g < g_end; ++g) {
        const auto& grp = cb.groups()[g];
        const cmat contrib = Heff.middleCols(static_cast<Eigen::Index>(grp.offset), static_cast<Eigen::Index>(grp.size)) *
                             grp.alphabet;
        const Eigen::Index A = contrib.cols();
        cmat next(Heff.rows(), acc.cols() * A);
        for (Eigen::Index i = 0; i < acc.cols(); ++i)
            next.middleCols(i * A, A) = contrib.colwise() + acc.col(i);
        acc = std::move(next);
    }
    return acc;
}

inline std::vector<std::uint64_t> split_half_index(const Codebook& cb, std::uint64_t idx, std::size_t g_begin,
                                                   std::size_t g_end) {
    std::vector<std::uint64_t> words(g_end - g_begin);
    for (std::size_t g = g_end; g-- > g_begin;) {
        const unsigned ab = cb.groups()[g].alphabet_bits;
        words[g - g_begin] = idx & ((std::uint64_t{1} << ab) - 1);
        idx >>= ab;
    }
    return words;
}

}  // namespace detail

/// x_hat = H^H (H H^H + I/gamma)^{-1} y via a Cholesky solve.
inline cvec mmse_equalize(const cvec& y, const cmat& Heff, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("mmse_equalize: gamma must be > 0");
    if (Heff.rows() != y.size()) throw std::invalid_argument("mmse_equalize: dimension mismatch");
    cmat A = Heff * Heff.adjoint();
    A.diagonal().array() += 1.0 / gamma;
    Eigen::LLT<cmat> llt(A);
    if (llt.info() != Eigen::Success) throw std::runtime_error("mmse_equalize: regularized system is singular");
    return Heff.adjoint() * llt.solve(y);
}

/// Nearest alphabet column per group.
inline Codeword slice_to_codebook(const Codebook& cb, const cvec& x, std::uint64_t pattern) {
    Codeword cw{pattern, {}};
    for (const auto& g : cb.groups()) {
        const cvec seg = x.segment(static_cast<Eigen::Index>(g.offset), static_cast<Eigen::Index>(g.size));
        Eigen::Index best = 0;
        (g.alphabet.colwise() - seg).colwise().squaredNorm().minCoeff(&best);
        cw.words.push_back(static_cast<std::uint64_t>(best));
    }
    return cw;
}

/// Exhaustive joint ML over all legal (pattern, symbol) codewords.
///
/// Each pattern's symbol search is split in two halves of groups:
/// |y - H_a a - H_b b|^2 = |u_a|^2 + |v_b|^2 - 2 Re(u_a^H v_b) with
/// u_a = y - H_a a, v_b = H_b b, so all cross terms come from one product.
inline DetectionResult ml_detect(const Codebook& cb, const cvec& r, const cmat& H, const DetectorOptions& opts = {}) {
    detail::check_inputs(cb, r, H);
    if (cb.bits_per_frame() > opts.max_search_bits)
        throw SizeGuardError("ml_detect: " + std::to_string(cb.bits_per_frame()) + " bits per frame exceed the bound of " +
                             std::to_string(opts.max_search_bits));
    const std::size_t G = cb.groups().size();
    const std::size_t half = G / 2;

    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_k = 0, best_a = 0, best_b = 0;
    for (std::uint64_t k = 0; k < cb.pattern_count(); ++k) {
        const cmat D = cb.daft_matrix_for(k);
        const cvec y = D * r;
        const cmat Heff = D * H * D.adjoint();

        cmat U = detail::half_contributions(cb, Heff, 0, half);
        U = (-U).colwise() + y;
        const cmat V = detail::half_contributions(cb, Heff, half, G);
        const Eigen::VectorXd un = U.colwise().squaredNorm().transpose();
        const Eigen::VectorXd vn = V.colwise().squaredNorm().transpose();
        const Eigen::MatrixXd cross = (U.adjoint() * V).real();

        for (Eigen::Index a = 0; a < U.cols(); ++a)
            for (Eigen::Index b = 0; b < V.cols(); ++b) {
                const double res = un[a] + vn[b] - 2.0 * cross(a, b);
                if (res < best) {
                    best = res;
                    best_k = k;
                    best_a = static_cast<std::uint64_t>(a);
                    best_b = static_cast<std::uint64_t>(b);
                }
            }
    }

    Codeword cw{best_k, detail::split_half_index(cb, best_a, 0, half)};
    const auto tail = detail::split_half_index(cb, best_b, half, G);
    cw.words.insert(cw.words.end(), tail.begin(), tail.end());
    return detail::finish(cb, std::move(cw), std::max(best, 0.0));
}

/// Per-pattern MMSE equalization followed by residual-based pattern choice.
inline DetectionResult ml_mmse_detect(const Codebook& cb, const cvec& r, const cmat& H, double gamma,
                                      const DetectorOptions& opts = {}) {
    detail::check_inputs(cb, r, H);
    if (cb.pattern_bits() > opts.max_search_bits)
        throw SizeGuardError("ml_mmse_detect: " + std::to_string(cb.pattern_bits()) +
                             " pattern bits exceed the bound of " + std::to_string(opts.max_search_bits));
    double best = std::numeric_limits<double>::infinity();
    Codeword best_cw;
    for (std::uint64_t k = 0; k < cb.pattern_count(); ++k) {
        const cmat D = cb.daft_matrix_for(k);
        const cvec y = D * r;
        const cmat Heff = D * H * D.adjoint();
        const cvec x_hat = mmse_equalize(y, Heff, gamma);
        Codeword cw = slice_to_codebook(cb, x_hat, k);
        const double res = opts.score_sliced ? (y - Heff * cb.symbols(cw)).squaredNorm() : (y - Heff * x_hat).squaredNorm();
        if (res < best) {
            best = res;
            best_cw = std::move(cw);
        }
    }
    return detail::finish(cb, std::move(best_cw), best);
}

inline DetectionResult detect(DetectorKind kind, const Codebook& cb, const cvec& r, const cmat& H, double gamma,
                              const DetectorOptions& opts = {}) {
    return kind == DetectorKind::Ml ? ml_detect(cb, r, H, opts) : ml_mmse_detect(cb, r, H, gamma, opts);
}

}  // namespace afdm_pim
