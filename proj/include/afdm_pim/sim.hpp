// sim.hpp - seeded Monte Carlo BER sweeps.
//
// Frame f at SNR point i draws its bits, channel and noise from three
// independent streams seeded by (master_seed, i, f, stream tag), so
//   - results do not depend on how frames are spread over threads, and
//   - every scheme run with the same seed sees the same channels and the
//     same unit-variance noise draws (paired comparison).
// Frames run in fixed-size batches; the stop rule is checked between batches.

#pragma once

#include "afdm_pim/channel.hpp"
#include "afdm_pim/codebook.hpp"
#include "afdm_pim/detectors.hpp"
#include "afdm_pim/pim_codec.hpp"
#include "afdm_pim/schemes.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace afdm_pim {

enum class C1Rule { FullDiversity, Fixed };

struct StopRule {
    std::uint64_t min_errors = 200;
    std::uint64_t max_frames = 200000;

    friend bool operator==(const StopRule&, const StopRule&) = default;
};

struct SweepConfig {
    SchemeKind scheme = SchemeKind::AfdmPim;
    std::size_t N = 8;
    std::size_t G = 2;
    unsigned M = 2;
    std::vector<double> c2_set;  // empty: pi/2-spaced set
    C1Rule c1_rule = C1Rule::FullDiversity;
    double c1_value = 0.0;  // used with C1Rule::Fixed
    ChannelSpec channel{3, 4, 2};
    std::optional<std::size_t> cp_len;  // empty: d_max
    DetectorKind detector = DetectorKind::Ml;
    std::vector<double> snr_db;
    std::uint64_t seed = 1;
    StopRule stop;

    friend bool operator==(const SweepConfig& a, const SweepConfig& b) {
        return a.scheme == b.scheme && a.N == b.N && a.G == b.G && a.M == b.M && a.c2_set == b.c2_set &&
               a.c1_rule == b.c1_rule && a.c1_value == b.c1_value && a.channel.paths == b.channel.paths &&
               a.channel.d_max == b.channel.d_max && a.channel.alpha_max == b.channel.alpha_max &&
               a.cp_len == b.cp_len && a.detector == b.detector && a.snr_db == b.snr_db && a.seed == b.seed &&
               a.stop == b.stop;
    }

    std::size_t prefix_length() const { return cp_len.value_or(channel.d_max); }

    /// The post-chirp actually used. OFDM and OFDM-IM always use c1 = 0.
    PostChirp c1() const {
        if (scheme == SchemeKind::Ofdm || scheme == SchemeKind::OfdmIm) return 0.0;
        if (c1_rule == C1Rule::FullDiversity) return full_diversity_c1(N, channel.alpha_max);
        return c1_value;
    }

    std::vector<double> effective_c2_set() const {
        if (!c2_set.empty()) return c2_set;
        const std::size_t n = (G != 0 && N % G == 0) ? N / G : 1;
        return half_pi_c2_set(static_cast<unsigned>(scheme == SchemeKind::AfdmPim ? n : std::max<std::size_t>(n, 1)));
    }

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const {
        if (N == 0) throw std::invalid_argument("N must be >= 1");
        if (G == 0 || N % G != 0)
            throw std::invalid_argument("G=" + std::to_string(G) + " does not divide N=" + std::to_string(N));
        if (M < 2 || (M & (M - 1)) != 0) throw std::invalid_argument("M=" + std::to_string(M) + " is not a power of two");
        channel.validate(N);
        if (prefix_length() >= N) throw std::invalid_argument("L_cp must be < N");
        if (prefix_length() < channel.d_max) throw std::invalid_argument("L_cp must be >= d_max");
        if (snr_db.empty()) throw std::invalid_argument("snr_db_list is empty");
        for (std::size_t i = 1; i < snr_db.size(); ++i)
            if (!(snr_db[i] > snr_db[i - 1])) throw std::invalid_argument("snr_db_list must be strictly increasing");
        if (stop.max_frames == 0) throw std::invalid_argument("stop.max_frames must be >= 1");
        if (scheme == SchemeKind::OfdmIm && N / G < 2) throw std::invalid_argument("OFDM-IM needs groups of >= 2 subcarriers");
        if (scheme == SchemeKind::Afdm && effective_c2_set().empty()) throw std::invalid_argument("c2_set is empty");
    }
};

inline Codebook make_codebook(const SweepConfig& cfg) {
    cfg.validate();
    const std::size_t L = cfg.prefix_length();
    switch (cfg.scheme) {
        case SchemeKind::AfdmPim:
            return make_afdm_pim_codebook(PimConfig(cfg.N, cfg.G, cfg.M, cfg.effective_c2_set()), cfg.c1(), L);
        case SchemeKind::Afdm: return make_afdm_codebook(cfg.N, cfg.G, cfg.M, cfg.effective_c2_set().front(), cfg.c1(), L);
        case SchemeKind::Ofdm: return make_ofdm_codebook(cfg.N, cfg.G, cfg.M, L);
        case SchemeKind::OfdmIm: {
            const auto n_im = static_cast<unsigned>(cfg.N / cfg.G);
            return make_ofdm_im_codebook(cfg.N, n_im, n_im - 1, cfg.M, L);
        }
    }
    throw std::logic_error("unreachable");
}

struct BerRecord {
    std::string scheme;
    std::string detector;
    double snr_db = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t total_bits = 0;
    double ber = 0.0;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
    bool stop_rule_met = true;  // false: max_frames reached before min_errors
};

/// N0 for unit-energy symbols at a given Eb/N0, with eta = B/N information
/// bits per subcarrier use (prefix excluded).
inline double noise_variance(double ebn0_db, std::size_t bits_per_frame, std::size_t N) {
    const double eta = static_cast<double>(bits_per_frame) / static_cast<double>(N);
    return 1.0 / (eta * std::pow(10.0, ebn0_db / 10.0));
}

enum class Stream : std::uint32_t { Bits = 1, Channel = 2, Noise = 3 };

inline std::mt19937_64 frame_rng(std::uint64_t master_seed, std::size_t snr_index, std::uint64_t frame, Stream s) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(snr_index), static_cast<std::uint32_t>(frame),
                      static_cast<std::uint32_t>(frame >> 32), static_cast<std::uint32_t>(s)};
    return std::mt19937_64(seq);
}

struct RunOptions {
    unsigned threads = 0;  // 0: hardware concurrency
    std::size_t batch_frames = 64;
    std::optional<double> n0_override;  // replaces the Eb/N0-derived N0 (0 = noiseless)
    DetectorOptions detector;
    /// Skip the remaining SNR points once a point's BER falls below this.
    std::optional<double> stop_below_ber;
    /// Called after each SNR point.
    std::function<void(const BerRecord&)> progress;
};

struct FrameOutcome {
    std::uint64_t bit_errors = 0;
};

/// One frame through bits -> modulate -> channel + noise -> detect.
inline FrameOutcome simulate_frame(const Codebook& cb, const SweepConfig& cfg, double N0, std::size_t snr_index,
                                   std::uint64_t frame, const DetectorOptions& dopts) {
    auto bit_rng = frame_rng(cfg.seed, snr_index, frame, Stream::Bits);
    auto ch_rng = frame_rng(cfg.seed, snr_index, frame, Stream::Channel);
    auto noise_rng = frame_rng(cfg.seed, snr_index, frame, Stream::Noise);

    Bits bits(cb.bits_per_frame());
    for (auto& b : bits) b = static_cast<std::uint8_t>(bit_rng() >> 63);

    const TimeFrame tx = cb.modulate(bits);
    const ChannelRealization ch = sample_channel(cfg.channel, cb.N(), ch_rng);
    const cvec r = apply_channel_timedomain(tx, ch, noise_rng, N0);
    const cmat H = build_time_matrix(ch, cb.chirp_config(0));
    const double gamma = N0 > 0.0 ? 1.0 / N0 : 1e12;
    const DetectionResult det = detect(cfg.detector, cb, r, H, gamma, dopts);

    FrameOutcome out;
    for (std::size_t i = 0; i < bits.size(); ++i) out.bit_errors += bits[i] != det.bits[i];
    return out;
}

namespace detail {

// Runs frames [first, first + count) and returns per-frame outcomes in order.
inline std::vector<FrameOutcome> run_batch(const Codebook& cb, const SweepConfig& cfg, double N0, std::size_t snr_index,
                                           std::uint64_t first, std::size_t count, unsigned threads,
                                           const DetectorOptions& dopts) {
    std::vector<FrameOutcome> out(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        try {
            for (std::size_t i; (i = next.fetch_add(1)) < count && !failed;)
                out[i] = simulate_frame(cb, cfg, N0, snr_index, first + i, dopts);
        } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
        }
    };
    const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (t == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < t; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace detail

inline std::vector<BerRecord> run_ber_sweep(const SweepConfig& cfg, const RunOptions& opts = {}) {
    const Codebook cb = make_codebook(cfg);
    const std::size_t B = cb.bits_per_frame();
    if (cfg.detector == DetectorKind::Ml ? B > opts.detector.max_search_bits
                                         : cb.pattern_bits() > opts.detector.max_search_bits)
        throw SizeGuardError(cb.name() + ": search space of " + std::to_string(B) + " bits exceeds the bound of " +
                             std::to_string(opts.detector.max_search_bits));
    const unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    const std::size_t batch = std::max<std::size_t>(1, opts.batch_frames);

    std::vector<BerRecord> records;
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const double N0 = opts.n0_override.value_or(noise_variance(cfg.snr_db[i], B, cb.N()));
        BerRecord rec;
        rec.scheme = to_string(cfg.scheme);
        rec.detector = to_string(cfg.detector);
        rec.snr_db = cfg.snr_db[i];
        rec.seed = cfg.seed;
        while (rec.frames < cfg.stop.max_frames && rec.bit_errors < cfg.stop.min_errors) {
            const auto count = static_cast<std::size_t>(std::min<std::uint64_t>(batch, cfg.stop.max_frames - rec.frames));
            for (const auto& o : detail::run_batch(cb, cfg, N0, i, rec.frames, count, threads, opts.detector))
                rec.bit_errors += o.bit_errors;
            rec.frames += count;
        }
        rec.total_bits = rec.frames * B;
        rec.ber = static_cast<double>(rec.bit_errors) / static_cast<double>(rec.total_bits);
        rec.stop_rule_met = rec.bit_errors >= cfg.stop.min_errors;
        rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (opts.progress) opts.progress(rec);
        records.push_back(rec);
        if (opts.stop_below_ber && rec.ber < *opts.stop_below_ber) break;
    }
    return records;
}

/// Eb/N0 (dB) where the BER curve crosses `target`, interpolating log10(BER)
/// linearly between the bracketing points. Empty if the curve never crosses.
inline std::optional<double> snr_at_ber(const std::vector<BerRecord>& recs, double target) {
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const double b0 = recs[i - 1].ber, b1 = recs[i].ber;
        if (b0 >= target && b1 < target) {
            if (b1 <= 0.0) return recs[i].snr_db;
            const double l0 = std::log10(b0), l1 = std::log10(b1), lt = std::log10(target);
            return recs[i - 1].snr_db + (lt - l0) / (l1 - l0) * (recs[i].snr_db - recs[i - 1].snr_db);
        }
    }
    return std::nullopt;
}

/// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

inline std::vector<double> snr_range(double from, double to, double step) {
    if (!(step > 0.0) || to < from) throw std::invalid_argument("snr range needs step > 0 and to >= from");
    std::vector<double> v;
    const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) v.push_back(from + static_cast<double>(i) * step);
    return v;
}

}  // namespace afdm_pim
