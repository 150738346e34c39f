// transform.hpp - discrete affine Fourier transform with per-subcarrier
// pre-chirp, subcarrier chirps and the chirp-periodic prefix.
//
// Conventions (shared by every module):
//   D[m,l] = (1/sqrt(N)) exp(-i2pi (c1 l^2 + c2[m] m^2 + m l / N))
//   D      = Lam2 * F * Lam1,   D^H = Lam1^H * F^H * Lam2^H
//   daft(r) = D r,   idaft(x) = D^H x
// with F the unitary DFT, Lam1 = diag(exp(-i2pi c1 l^2)) the post-chirp and
// Lam2 = diag(exp(-i2pi c2[m] m^2)) the pre-chirp.

#pragma once

#include "afdm_pim/linalg.hpp"

#include <unsupported/Eigen/FFT>

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace afdm_pim {

/// Exact rational, used where an integer-exponent argument must be made
/// without floating point (the CPP phase under the full-diversity c1 rule).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    /// Fractional part of (num/den)*k in turns, reduced in integer arithmetic.
    double turns_times(std::int64_t k) const {
        std::int64_t r = (num * k) % den;
        if (r < 0) r += den;
        return static_cast<double>(r) / static_cast<double>(den);
    }
};

/// A post-chirp rate, optionally with its exact rational value so integer
/// exponents stay exact for any N.
struct PostChirp {
    double value = 0.0;
    std::optional<Rational> exact;

    PostChirp(double v) : value(v) {}
    PostChirp(Rational r) : value(r.value()), exact(r) {}
};

/// c1 = (2*alpha_max + 1) / (2N): the post-chirp rate that separates
/// integer-Doppler paths.
inline Rational full_diversity_c1(std::size_t N, int alpha_max) {
    if (N == 0 || alpha_max < 0) throw std::invalid_argument("full_diversity_c1: need N >= 1, alpha_max >= 0");
    return {2 * static_cast<std::int64_t>(alpha_max) + 1, 2 * static_cast<std::int64_t>(N)};
}

struct ChirpConfig {
    std::size_t N = 0;
    double c1 = 0.0;
    std::vector<double> c2;  // per-subcarrier pre-chirp, length N
    std::size_t cp_len = 0;
    std::optional<Rational> c1_exact;  // when set, must equal c1

    /// exp(sign * i2pi c1 k) for an integer k.
    cplx c1_phase(std::int64_t k, double sign) const {
        if (c1_exact) return unit_phase(c1_exact->turns_times(k), sign);
        return unit_phase(product_turns(c1, static_cast<double>(k)), sign);
    }

    void validate() const {
        if (N == 0) throw std::invalid_argument("ChirpConfig: N must be >= 1");
        if (c2.size() != N)
            throw std::invalid_argument("ChirpConfig: c2 has " + std::to_string(c2.size()) +
                                        " entries, expected N=" + std::to_string(N));
        if (cp_len >= N)
            throw std::invalid_argument("ChirpConfig: prefix length must be < N");
    }

    static ChirpConfig uniform(std::size_t N, PostChirp c1, double c2, std::size_t cp_len = 0) {
        return {N, c1.value, std::vector<double>(N, c2), cp_len, c1.exact};
    }
};

struct TransformMatrices {
    cmat F;     // unitary DFT, F[m,l] = exp(-i2pi ml/N)/sqrt(N)
    cmat Lam1;  // post-chirp
    cmat Lam2;  // pre-chirp
    cmat D;     // Lam2 * F * Lam1
};

struct TimeFrame {
    cvec prefix;  // s[-L_cp .. -1]
    cvec body;    // s[0 .. N-1]
};

namespace detail {

inline cvec post_chirp(const ChirpConfig& cfg, double sign) {
    cvec v(static_cast<Eigen::Index>(cfg.N));
    for (std::size_t l = 0; l < cfg.N; ++l)
        v[static_cast<Eigen::Index>(l)] = cfg.c1_phase(static_cast<std::int64_t>(l * l), sign);
    return v;
}

inline cvec pre_chirp(const ChirpConfig& cfg, double sign) {
    cvec v(static_cast<Eigen::Index>(cfg.N));
    for (std::size_t m = 0; m < cfg.N; ++m)
        v[static_cast<Eigen::Index>(m)] = unit_phase(product_turns(cfg.c2[m], static_cast<double>(m * m)), sign);
    return v;
}

inline void check_length(Eigen::Index got, std::size_t N, const char* what) {
    if (static_cast<std::size_t>(got) != N)
        throw std::invalid_argument(std::string(what) + ": length " + std::to_string(got) +
                                    " does not match N=" + std::to_string(N));
}

}  // namespace detail

/// Unitary DFT matrix with the forward (negative exponent) sign.
inline cmat dft_matrix(std::size_t N) {
    const auto n = static_cast<Eigen::Index>(N);
    cmat F(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (std::size_t m = 0; m < N; ++m)
        for (std::size_t l = 0; l < N; ++l)
            F(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(l)) =
                scale * unit_phase(static_cast<double>((m * l) % N) / static_cast<double>(N), -1.0);
    return F;
}

inline TransformMatrices build_matrices(const ChirpConfig& cfg) {
    cfg.validate();
    TransformMatrices t;
    t.F = dft_matrix(cfg.N);
    t.Lam1 = detail::post_chirp(cfg, -1.0).asDiagonal();
    t.Lam2 = detail::pre_chirp(cfg, -1.0).asDiagonal();
    t.D = t.Lam2 * t.F * t.Lam1;
    return t;
}

/// Just the DAFT matrix D, built as the chirp-scaled DFT.
inline cmat daft_matrix(const ChirpConfig& cfg) {
    cfg.validate();
    return detail::pre_chirp(cfg, -1.0).asDiagonal() * dft_matrix(cfg.N) *
           detail::post_chirp(cfg, -1.0).asDiagonal();
}

/// s = D^H x, computed as post-chirp(+) . IFFT . pre-chirp(+).
inline cvec idaft(const cvec& x, const ChirpConfig& cfg) {
    cfg.validate();
    detail::check_length(x.size(), cfg.N, "idaft");
    const cvec pre = x.cwiseProduct(detail::pre_chirp(cfg, +1.0));
    std::vector<cplx> in(pre.data(), pre.data() + pre.size()), out;
    Eigen::FFT<double> fft;
    fft.inv(out, in);  // includes 1/N
    cvec s = Eigen::Map<cvec>(out.data(), static_cast<Eigen::Index>(out.size()));
    s *= std::sqrt(static_cast<double>(cfg.N));
    return s.cwiseProduct(detail::post_chirp(cfg, +1.0));
}

/// y = D r, computed as pre-chirp(-) . FFT . post-chirp(-).
inline cvec daft(const cvec& r, const ChirpConfig& cfg) {
    cfg.validate();
    detail::check_length(r.size(), cfg.N, "daft");
    const cvec post = r.cwiseProduct(detail::post_chirp(cfg, -1.0));
    std::vector<cplx> in(post.data(), post.data() + post.size()), out;
    Eigen::FFT<double> fft;
    fft.fwd(out, in);
    cvec y = Eigen::Map<cvec>(out.data(), static_cast<Eigen::Index>(out.size()));
    y /= std::sqrt(static_cast<double>(cfg.N));
    return y.cwiseProduct(detail::pre_chirp(cfg, -1.0));
}

/// Time-domain chirp carrying symbol slot m: column m of D^H.
inline cvec subcarrier_waveform(std::size_t m, const ChirpConfig& cfg) {
    cfg.validate();
    if (m >= cfg.N) throw std::out_of_range("subcarrier_waveform: index " + std::to_string(m) + " >= N");
    const auto n = static_cast<Eigen::Index>(cfg.N);
    cvec phi(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.N));
    const cplx chirp2 = unit_phase(product_turns(cfg.c2[m], static_cast<double>(m * m)));
    for (std::size_t l = 0; l < cfg.N; ++l) {
        const double turns = static_cast<double>((l * m) % cfg.N) / static_cast<double>(cfg.N);
        phi[static_cast<Eigen::Index>(l)] = scale * cfg.c1_phase(static_cast<std::int64_t>(l * l), 1.0) * chirp2 * unit_phase(turns);
    }
    return phi;
}

/// <Phi_{m1}^{c2a}, Phi_{m2}^{c2b}> = sum_l Phi_{m1}[l] * conj(Phi_{m2}[l]).
/// The two chirps share c1 and N; only their pre-chirp values differ.
inline cplx cross_correlation(std::size_t m1, double c2_a, std::size_t m2, double c2_b, const ChirpConfig& cfg) {
    ChirpConfig a = cfg, b = cfg;
    a.c2.assign(cfg.N, c2_a);
    b.c2.assign(cfg.N, c2_b);
    return subcarrier_waveform(m2, b).dot(subcarrier_waveform(m1, a));  // dot conjugates its left side
}

/// Exponent c1*(N^2 + 2Nl) of the CPP phase, in turns.
inline double cpp_phase_turns(double c1, std::size_t N, std::int64_t l) {
    const auto n = static_cast<std::int64_t>(N);
    return c1 * static_cast<double>(n * n + 2 * n * l);
}

/// exp(-i2pi c1 (N^2 + 2Nl)) for a prefix index l in [-L_cp, -1].
inline cplx cpp_phase(double c1, std::size_t N, std::int64_t l) {
    const auto n = static_cast<std::int64_t>(N);
    return unit_phase(product_turns(c1, static_cast<double>(n * n + 2 * n * l)), -1.0);
}

/// Same, for a config: exact when the config carries a rational c1.
inline cplx cpp_phase(const ChirpConfig& cfg, std::int64_t l) {
    const auto n = static_cast<std::int64_t>(cfg.N);
    return cfg.c1_phase(n * n + 2 * n * l, -1.0);
}

/// True when c1*(N^2 + 2Nl) is an integer, decided in exact integer
/// arithmetic; the CPP phase is then exactly 1.
inline bool cpp_exponent_is_integer(const Rational& c1, std::size_t N, std::int64_t l) {
    const auto n = static_cast<std::int64_t>(N);
    const std::int64_t numer = c1.num * (n * n + 2 * n * l);
    return numer % c1.den == 0;
}

inline TimeFrame append_cpp(const cvec& body, const ChirpConfig& cfg) {
    cfg.validate();
    detail::check_length(body.size(), cfg.N, "append_cpp");
    const auto L = static_cast<std::int64_t>(cfg.cp_len);
    const auto n = static_cast<std::int64_t>(cfg.N);
    TimeFrame frame{cvec(L), body};
    for (std::int64_t l = -L; l < 0; ++l)
        frame.prefix[L + l] = body[n + l] * cpp_phase(cfg, l);
    return frame;
}

inline cvec strip_cpp(const TimeFrame& frame) { return frame.body; }

}  // namespace afdm_pim
