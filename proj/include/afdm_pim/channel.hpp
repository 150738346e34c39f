// channel.hpp - doubly dispersive channel with integer delays and integer
// normalized Dopplers.
//
// Path p contributes h_p * exp(-i2pi alpha_p l / N) * s[l - d_p] to r[l];
// samples at negative time come from the chirp-periodic prefix.

#pragma once

#include "afdm_pim/linalg.hpp"
#include "afdm_pim/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace afdm_pim {

struct ChannelSpec {
    unsigned paths = 1;  // P
    unsigned d_max = 0;
    int alpha_max = 0;

    void validate(std::size_t N) const {
        if (paths < 1) throw std::invalid_argument("ChannelSpec: need at least one path");
        if (d_max >= N) throw std::invalid_argument("ChannelSpec: d_max must be < N");
        if (alpha_max < 0) throw std::invalid_argument("ChannelSpec: alpha_max must be >= 0");
        const std::size_t cells = static_cast<std::size_t>(d_max + 1) * static_cast<std::size_t>(2 * alpha_max + 1);
        if (paths > cells)
            throw std::invalid_argument("ChannelSpec: " + std::to_string(paths) + " paths do not fit in " +
                                        std::to_string(cells) + " distinct delay-Doppler cells");
    }
};

struct PathTap {
    cplx gain;
    unsigned delay = 0;
    int doppler = 0;  // alpha_p, cycles per frame
};

struct ChannelRealization {
    std::vector<PathTap> paths;

    unsigned max_delay() const {
        unsigned d = 0;
        for (const auto& p : paths) d = std::max(d, p.delay);
        return d;
    }

    static ChannelRealization identity() { return {{PathTap{{1.0, 0.0}, 0, 0}}}; }
};

/// Gains are CN(0, 1/P). Delays are distinct with the first path pinned at
/// zero; when P exceeds d_max + 1 delays may repeat, and the (delay, Doppler)
/// pairs are then kept distinct instead.
template <class Rng>
ChannelRealization sample_channel(const ChannelSpec& spec, std::size_t N, Rng& rng) {
    spec.validate(N);
    const unsigned P = spec.paths;
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 / P));
    std::uniform_int_distribution<int> doppler(-spec.alpha_max, spec.alpha_max);

    std::vector<unsigned> delays{0};
    if (P <= spec.d_max + 1) {
        std::vector<unsigned> pool(spec.d_max);
        std::iota(pool.begin(), pool.end(), 1u);
        for (unsigned p = 1; p < P; ++p) {
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            const std::size_t i = pick(rng);
            delays.push_back(pool[i]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
        }
    } else {
        std::uniform_int_distribution<unsigned> delay(0, spec.d_max);
        for (unsigned p = 1; p < P; ++p) delays.push_back(delay(rng));
    }

    ChannelRealization ch;
    for (unsigned p = 0; p < P; ++p) {
        PathTap tap;
        tap.delay = delays[p];
        for (;;) {
            tap.doppler = doppler(rng);
            const bool clash = std::any_of(ch.paths.begin(), ch.paths.end(), [&](const PathTap& q) {
                return q.delay == tap.delay && q.doppler == tap.doppler;
            });
            if (!clash) break;
        }
        const double re = gauss(rng);
        const double im = gauss(rng);
        tap.gain = {re, im};
        ch.paths.push_back(tap);
    }
    return ch;
}

/// exp(-i2pi alpha l / N), reduced in integers.
inline cplx doppler_phase(int alpha, std::size_t l, std::size_t N) {
    const auto n = static_cast<long long>(N);
    long long k = (static_cast<long long>(alpha) * static_cast<long long>(l)) % n;
    if (k < 0) k += n;
    return unit_phase(static_cast<double>(k) / static_cast<double>(N), -1.0);
}

/// i.i.d. CN(0, N0) samples.
template <class Rng>
cvec awgn(std::size_t len, double N0, Rng& rng) {
    if (N0 < 0.0) throw std::invalid_argument("awgn: N0 must be >= 0");
    cvec w = cvec::Zero(static_cast<Eigen::Index>(len));
    if (N0 == 0.0) return w;
    std::normal_distribution<double> gauss(0.0, std::sqrt(N0 / 2.0));
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        w[i] = {re, im};
    }
    return w;
}

/// Noiseless received body: direct evaluation of the delay-Doppler sum.
inline cvec convolve_channel(const TimeFrame& frame, const ChannelRealization& ch) {
    const auto N = static_cast<std::size_t>(frame.body.size());
    const auto L = static_cast<long long>(frame.prefix.size());
    cvec r = cvec::Zero(static_cast<Eigen::Index>(N));
    for (const auto& p : ch.paths) {
        if (p.delay > static_cast<unsigned>(L))
            throw std::invalid_argument("apply_channel: delay " + std::to_string(p.delay) + " exceeds prefix length " +
                                        std::to_string(L));
        for (std::size_t l = 0; l < N; ++l) {
            const long long t = static_cast<long long>(l) - p.delay;
            const cplx s = t >= 0 ? frame.body[t] : frame.prefix[L + t];
            r[static_cast<Eigen::Index>(l)] += p.gain * doppler_phase(p.doppler, l, N) * s;
        }
    }
    return r;
}

/// r = sum_p h_p exp(-i2pi alpha_p l/N) s[l - d_p] + w, w ~ CN(0, N0 I).
template <class Rng>
cvec apply_channel_timedomain(const TimeFrame& frame, const ChannelRealization& ch, Rng& rng, double N0) {
    cvec r = convolve_channel(frame, ch);
    if (N0 > 0.0) r += awgn(static_cast<std::size_t>(r.size()), N0, rng);
    return r;
}

/// Time-domain channel matrix with the prefix folded in:
/// H[l, (l - d) mod N] += h exp(-i2pi alpha l/N) phi(l), where phi is the CPP
/// phase exp(-i2pi c1 (N^2 + 2N(l - d))) for wrapped samples (l < d) and 1
/// otherwise.
inline cmat build_time_matrix(const ChannelRealization& ch, const ChirpConfig& cfg) {
    const std::size_t N = cfg.N;
    const auto n = static_cast<Eigen::Index>(N);
    cmat H = cmat::Zero(n, n);
    for (const auto& p : ch.paths) {
        if (p.delay >= N || p.delay > cfg.cp_len)
            throw std::invalid_argument("build_time_matrix: delay " + std::to_string(p.delay) + " out of range");
        for (std::size_t l = 0; l < N; ++l) {
            const long long t = static_cast<long long>(l) - p.delay;
            cplx v = p.gain * doppler_phase(p.doppler, l, N);
            if (t < 0) v *= cpp_phase(cfg, t);
            const auto col = static_cast<Eigen::Index>((t + static_cast<long long>(N)) % static_cast<long long>(N));
            H(static_cast<Eigen::Index>(l), col) += v;
        }
    }
    return H;
}

/// H_eff = D H D^H for a given DAFT matrix.
inline cmat build_effective_matrix(const cmat& H, const cmat& D) {
    if (H.rows() != D.rows() || H.cols() != D.cols())
        throw std::invalid_argument("build_effective_matrix: dimension mismatch");
    return D * H * D.adjoint();
}

inline cmat build_effective_matrix(const cmat& H, const ChirpConfig& cfg) {
    return build_effective_matrix(H, daft_matrix(cfg));
}

}  // namespace afdm_pim
