// presets.hpp - the three reference comparisons at N = 8.
//
//   fig2: AFDM-PIM/BPSK vs classic AFDM/QPSK, 2 b/s/Hz, d_max 4, alpha_max 2
//   fig3: AFDM-PIM vs AFDM, OFDM, OFDM-IM, 2 b/s/Hz, P 3, d_max 1, alpha_max 1
//   fig4: ML vs ML-MMSE for AFDM-PIM/BPSK with n = 2, G = 4 (1.5 b/s/Hz),
//         d_max 2, alpha_max 2
//
// All sweeps of one preset share a seed, so they see identical channels.

#pragma once

#include "afdm_pim/sim.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace afdm_pim {

enum class Preset { Fig2, Fig3, Fig4 };

inline Preset preset_from_string(const std::string& s) {
    if (s == "fig2") return Preset::Fig2;
    if (s == "fig3") return Preset::Fig3;
    if (s == "fig4") return Preset::Fig4;
    throw std::invalid_argument("unknown preset '" + s + "' (expected fig2|fig3|fig4)");
}

inline std::string to_string(Preset p) {
    switch (p) {
        case Preset::Fig2: return "fig2";
        case Preset::Fig3: return "fig3";
        case Preset::Fig4: return "fig4";
    }
    return "?";
}

namespace detail {

inline SweepConfig preset_base(std::size_t G, unsigned M, ChannelSpec ch, std::vector<double> snr) {
    SweepConfig c;
    c.N = 8;
    c.G = G;
    c.M = M;
    c.channel = ch;
    c.snr_db = std::move(snr);
    c.seed = 20240601;
    return c;
}

inline SweepConfig with_scheme(SweepConfig c, SchemeKind s, unsigned M, DetectorKind d = DetectorKind::Ml) {
    c.scheme = s;
    c.M = M;
    c.detector = d;
    return c;
}

}  // namespace detail

/// Sweeps of a preset. `paths` overrides P for fig2 (the path-count study).
inline std::vector<SweepConfig> preset_sweeps(Preset p, unsigned paths = 3) {
    using detail::preset_base;
    using detail::with_scheme;
    switch (p) {
        case Preset::Fig2: {
            const auto base = preset_base(2, 2, {paths, 4, 2}, snr_range(0, 40, 2));
            return {with_scheme(base, SchemeKind::AfdmPim, 2), with_scheme(base, SchemeKind::Afdm, 4)};
        }
        case Preset::Fig3: {
            const auto base = preset_base(2, 2, {3, 1, 1}, snr_range(0, 40, 2));
            return {with_scheme(base, SchemeKind::AfdmPim, 2), with_scheme(base, SchemeKind::Afdm, 4),
                    with_scheme(base, SchemeKind::Ofdm, 4), with_scheme(base, SchemeKind::OfdmIm, 4)};
        }
        case Preset::Fig4: {
            const auto base = preset_base(4, 2, {3, 2, 2}, snr_range(0, 40, 2));
            return {with_scheme(base, SchemeKind::AfdmPim, 2, DetectorKind::Ml),
                    with_scheme(base, SchemeKind::AfdmPim, 2, DetectorKind::MlMmse)};
        }
    }
    throw std::logic_error("unreachable");
}

inline std::vector<BerRecord> run_figure(Preset p, const RunOptions& opts = {}, unsigned paths = 3) {
    std::vector<BerRecord> all;
    for (const auto& cfg : preset_sweeps(p, paths)) {
        auto recs = run_ber_sweep(cfg, opts);
        all.insert(all.end(), recs.begin(), recs.end());
    }
    return all;
}

}  // namespace afdm_pim
