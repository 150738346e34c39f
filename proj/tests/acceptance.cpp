// acceptance - one PASS/FAIL line per acceptance criterion.
//
// Exits non-zero if any criterion fails. The BER criteria run the preset
// sweeps with a reduced stop rule; set AFDM_PIM_THREADS to pin parallelism.

#include "afdm_pim/channel.hpp"
#include "afdm_pim/config_io.hpp"
#include "afdm_pim/presets.hpp"
#include "afdm_pim/sim.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>

using namespace afdm_pim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Verdict& v) {
    std::printf("criterion %d [%s] %s: %s\n", id, v.pass ? "PASS" : "FAIL", title.c_str(), v.detail.c_str());
    std::fflush(stdout);
    failures += !v.pass;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

cvec random_cvec(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    cvec v(static_cast<Eigen::Index>(n));
    for (auto& z : v) z = {g(rng), g(rng)};
    return v;
}

unsigned threads() {
    if (const char* t = std::getenv("AFDM_PIM_THREADS")) return static_cast<unsigned>(std::atoi(t));
    return 0;
}

// Shared stop rule for the BER reproductions: 100 errors per point, at most
// 10^5 frames, and the sweep ends at the first point with BER below 1e-4.
RunOptions ber_options() {
    RunOptions o;
    o.threads = threads();
    o.stop_below_ber = 1e-4;
    return o;
}

std::vector<BerRecord> sweep(SweepConfig c) {
    c.stop = {100, 100000};
    return run_ber_sweep(c, ber_options());
}

std::string crossing(const std::optional<double>& s) { return s ? fmt("%.2f dB", *s) : std::string("n/a"); }

// ---------------------------------------------------------------------------

Verdict transform_correctness() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    double unit = 0, kernel = 0, orth = 0;
    for (std::size_t N : {2u, 4u, 8u, 16u, 32u}) {
        ChirpConfig cfg{N, full_diversity_c1(N, 2).value(), {}, 0};
        for (std::size_t m = 0; m < N; ++m) cfg.c2.push_back(u(rng));
        const cmat D = build_matrices(cfg).D;
        unit = std::max(unit, (D * D.adjoint() - cmat::Identity(N, N)).cwiseAbs().maxCoeff());
        kernel = std::max(kernel, (D - oracle::direct_daft_matrix(N, cfg.c1, cfg.c2)).cwiseAbs().maxCoeff());
        const cvec x = random_cvec(N, rng);
        kernel = std::max(kernel, (idaft(x, cfg) - oracle::direct_idaft(x, cfg.c1, cfg.c2)).cwiseAbs().maxCoeff());
        // Chirp subcarriers on distinct slots stay orthogonal for any pre-chirps.
        for (std::size_t m1 = 0; m1 < N; ++m1)
            for (std::size_t m2 = 0; m2 < N; ++m2) {
                const double a = u(rng), b = u(rng);
                const double c = std::abs(cross_correlation(m1, a, m2, b, cfg));
                orth = std::max(orth, m1 == m2 ? std::abs(c - 1.0) : c);
            }
    }
    const double t = seconds_since(t0);
    return {unit <= 1e-10 && kernel <= 1e-12 && orth <= 1e-12 && t < 5.0,
            fmt("max |DD^H - I| = %.1e (<= 1e-10), factored vs direct = %.1e (<= 1e-12), "
                "orthogonality = %.1e (<= 1e-12), N in {2,4,8,16,32}, %.2f s (< 5 s)",
                unit, kernel, orth, t)};
}

Verdict channel_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    int trials = 0, wrapped = 0;
    for (; trials < 1000; ++trials) {
        const std::size_t N = 4 + rng() % 29;
        const auto d_max = static_cast<unsigned>(1 + rng() % (N - 1));
        const int alpha_max = static_cast<int>(rng() % 4);
        const unsigned P = 1 + static_cast<unsigned>(rng() % std::min<std::size_t>(d_max + 1, 5));
        ChirpConfig cfg{N, u(rng), {}, d_max};
        for (std::size_t m = 0; m < N; ++m) cfg.c2.push_back(u(rng));
        const auto ch = sample_channel(ChannelSpec{P, d_max, alpha_max}, N, rng);
        wrapped += ch.max_delay() > 0;
        const cvec s = random_cvec(N, rng);
        const cvec r = apply_channel_timedomain(append_cpp(s, cfg), ch, rng, 0.0);
        worst = std::max(worst, (build_time_matrix(ch, cfg) * s - r).cwiseAbs().maxCoeff());
    }
    const double t = seconds_since(t0);
    return {worst <= 1e-10 && t < 10.0,
            fmt("%d random pairs (%d with CPP-wrapped taps, generic c1), max |Hs - conv| = %.1e (<= 1e-10), %.2f s (< 10 s)",
                trials, wrapped, worst, t)};
}

Verdict cpp_degeneracy() {
    int checked = 0, not_integer = 0, not_one = 0, inexact_prefix = 0;
    for (std::size_t N = 2; N <= 64; N += 2)
        for (int alpha = 0; alpha <= 4; ++alpha) {
            const Rational c1 = full_diversity_c1(N, alpha);
            const ChirpConfig cfg = ChirpConfig::uniform(N, c1, 0.0, N - 1);
            for (std::int64_t l = -static_cast<std::int64_t>(N) + 1; l < 0; ++l, ++checked) {
                not_integer += !cpp_exponent_is_integer(c1, N, l);
                not_one += cpp_phase(cfg, l) != cplx(1.0, 0.0);
            }
            // The prefix is then a plain cyclic copy, bit for bit.
            std::mt19937_64 rng(N * 7 + static_cast<unsigned>(alpha));
            const cvec body = random_cvec(N, rng);
            const auto f = append_cpp(body, cfg);
            inexact_prefix += f.prefix != body.tail(static_cast<Eigen::Index>(N - 1));
        }
    return {not_integer + not_one + inexact_prefix == 0,
            fmt("even N in [2,64], alpha_max in [0,4], every prefix index: %d exponents, %d not integer, %d phases != 1, "
                "%d prefixes not exact cyclic copies",
                checked, not_integer, not_one, inexact_prefix)};
}

Verdict codec_exhaustive() {
    const auto t0 = Clock::now();
    const PimConfig pc(8, 2, 2);
    const double c1 = full_diversity_c1(8, 2).value();
    const std::size_t B = pc.bits_per_frame();
    const std::uint64_t count = std::uint64_t{1} << B;
    std::uint64_t bad = 0;
    std::vector<cvec> tx;
    tx.reserve(count);
    for (std::uint64_t w = 0; w < count; ++w) {
        Bits bits;
        word_to_bits(w, B, bits);
        const auto [groups, frame] = encode_frame(bits, pc);
        const ChirpConfig cfg{8, c1, frame.c2, 4};
        const cvec s = idaft(frame.x, cfg);
        const auto back = disassemble_frame({daft(s, cfg), frame.c2}, pc);
        Bits out;
        for (const auto& g : back) {
            const Bits gb = decode_group(g.symbols, g.psp, pc);
            out.insert(out.end(), gb.begin(), gb.end());
        }
        bad += out != bits;
        tx.push_back(s);
    }
    // Injectivity: sweep-line over a random projection, exact distances for
    // every pair whose projections are within the threshold.
    std::mt19937_64 rng(404);
    const cvec dir = random_cvec(8, rng).normalized();
    std::vector<std::pair<double, std::uint32_t>> proj(count);
    for (std::uint64_t w = 0; w < count; ++w) proj[w] = {dir.dot(tx[w]).real(), static_cast<std::uint32_t>(w)};
    std::sort(proj.begin(), proj.end());
    const double tau = 1e-3;
    double min_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < proj.size(); ++i)
        for (std::size_t j = i + 1; j < proj.size() && proj[j].first - proj[i].first < tau; ++j)
            min_d2 = std::min(min_d2, (tx[proj[i].second] - tx[proj[j].second]).squaredNorm());
    const double t = seconds_since(t0);
    const bool injective = !(min_d2 < tau * tau);
    return {bad == 0 && injective && t < 60.0,
            fmt("%llu words, %llu round-trip failures, no two transmit vectors within %.0e (%s), %.1f s (< 60 s)",
                static_cast<unsigned long long>(count), static_cast<unsigned long long>(bad), tau,
                injective ? "injective" : "COLLISION", t)};
}

Verdict fig2_reproduction() {
    const auto t0 = Clock::now();
    std::map<unsigned, double> gaps;
    std::string detail;
    bool ok = true;
    for (unsigned P : {1u, 2u, 3u}) {
        const auto s = preset_sweeps(Preset::Fig2, P);
        const auto pim = snr_at_ber(sweep(s[0]), 1e-3);
        const auto afdm = snr_at_ber(sweep(s[1]), 1e-3);
        detail += fmt("P=%u: PIM %s, AFDM-QPSK %s", P, crossing(pim).c_str(), crossing(afdm).c_str());
        if (pim && afdm) {
            gaps[P] = *afdm - *pim;
            detail += fmt(", gain %+.2f dB; ", gaps[P]);
        } else {
            ok = false;
            detail += "; ";
        }
    }
    if (ok) {
        ok = std::abs(gaps[3] - 2.0) <= 1.0 && gaps[1] <= gaps[2] && gaps[2] <= gaps[3];
    }
    detail += fmt("need gain at P=3 of 2 +/- 1 dB and non-decreasing in P; %.0f s", seconds_since(t0));
    return {ok, detail};
}

Verdict fig3_reproduction() {
    const auto t0 = Clock::now();
    std::map<SchemeKind, std::optional<double>> at;
    for (const auto& c : preset_sweeps(Preset::Fig3)) at[c.scheme] = snr_at_ber(sweep(c), 1e-3);
    const auto pim = at[SchemeKind::AfdmPim], ofdm = at[SchemeKind::Ofdm], im = at[SchemeKind::OfdmIm];
    std::string detail = fmt("at 1e-3: PIM %s, AFDM %s, OFDM %s, OFDM-IM %s", crossing(pim).c_str(),
                             crossing(at[SchemeKind::Afdm]).c_str(), crossing(ofdm).c_str(), crossing(im).c_str());
    bool ok = pim && ofdm && im;
    if (ok) {
        const double g_ofdm = *ofdm - *pim, g_im = *im - *pim;
        ok = std::abs(g_ofdm - 5.0) <= 1.5 && std::abs(g_im - 3.0) <= 1.5;
        detail += fmt("; gain vs OFDM %+.2f dB (need 5 +/- 1.5), vs OFDM-IM %+.2f dB (need 3 +/- 1.5)", g_ofdm, g_im);
    }
    return {ok, detail + fmt("; %.0f s", seconds_since(t0))};
}

Verdict fig4_reproduction() {
    const auto t0 = Clock::now();
    const auto s = preset_sweeps(Preset::Fig4);
    const auto ml = sweep(s[0]);
    const auto mmse = sweep(s[1]);
    const auto a = snr_at_ber(ml, 1e-3), b = snr_at_ber(mmse, 1e-3);
    std::string detail = fmt("at 1e-3: ML %s, ML-MMSE %s", crossing(a).c_str(), crossing(b).c_str());
    bool ok = a && b;
    if (ok) {
        ok = std::abs((*b - *a) - 2.0) <= 1.0;
        detail += fmt(", loss %+.2f dB (need 2 +/- 1)", *b - *a);
    }
    // ML-MMSE must not be significantly better than ML anywhere (99% Wilson).
    int violations = 0;
    const std::size_t n = std::min(ml.size(), mmse.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto ml_ci = wilson_interval(ml[i].bit_errors, ml[i].total_bits, 2.576);
        const auto mm_ci = wilson_interval(mmse[i].bit_errors, mmse[i].total_bits, 2.576);
        violations += mm_ci.second < ml_ci.first;
    }
    ok = ok && violations == 0;
    return {ok, detail + fmt("; ML-MMSE below ML beyond 99%% confidence at %d of %zu points; %.0f s", violations, n,
                             seconds_since(t0))};
}

Verdict whiteness_and_parity() {
    std::mt19937_64 rng(808);
    const auto pim = preset_sweeps(Preset::Fig2)[0];
    const cmat D = make_codebook(pim).daft_matrix_for(0);
    const double N0 = 0.3;
    const int vectors = 1000000 / 8;
    cmat cov = cmat::Zero(8, 8);
    for (int t = 0; t < vectors; ++t) {
        const cvec w = D * awgn(8, N0, rng);
        cov.noalias() += w * w.adjoint();
    }
    cov /= vectors;
    const double rel = (cov - N0 * cmat::Identity(8, 8)).norm() / (N0 * std::sqrt(8.0));

    double worst = 0.0;
    std::string names;
    std::vector<SweepConfig> all;
    for (auto p : {Preset::Fig2, Preset::Fig3, Preset::Fig4})
        for (const auto& c : preset_sweeps(p)) all.push_back(c);
    for (const auto& c : all) {
        const Codebook cb = make_codebook(c);
        const std::uint64_t count = std::uint64_t{1} << cb.bits_per_frame();
        double acc = 0.0;
        for (std::uint64_t w = 0; w < count; ++w) {
            Bits b;
            word_to_bits(w, cb.bits_per_frame(), b);
            acc += cb.modulate(b).body.squaredNorm();
        }
        worst = std::max(worst, std::abs(acc / static_cast<double>(count) - 8.0));
    }
    return {rel < 0.02 && worst <= 1e-9,
            fmt("covariance of D w off N0 I by %.2f%% (< 2%%) over 10^6 samples; mean frame energy off N by %.1e "
                "(<= 1e-9) across %zu preset codebooks, averaged over every codeword",
                100 * rel, worst, all.size())};
}

Verdict determinism() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (auto p : {Preset::Fig2, Preset::Fig3, Preset::Fig4}) {
        std::string csv[2];
        const unsigned counts[2] = {1, 4};
        for (int k = 0; k < 2; ++k) {
            RunOptions o;
            o.threads = counts[k];
            std::vector<BerRecord> recs;
            for (auto c : preset_sweeps(p)) {
                c.stop = {20, 1024};
                auto r = run_ber_sweep(c, o);
                recs.insert(recs.end(), r.begin(), r.end());
            }
            csv[k] = format_csv(recs, false);
        }
        const bool same = csv[0] == csv[1];
        ok &= same;
        detail += fmt("%s %s (%zu bytes); ", to_string(p).c_str(), same ? "identical" : "DIFFER", csv[0].size());
    }
    return {ok, detail + fmt("1 vs 4 threads, stop rule 20 errors / 1024 frames, timing omitted; %.0f s",
                             seconds_since(t0))};
}

}  // namespace

// Optional arguments select criteria by number, e.g. `acceptance 1 4`.
int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"transform correctness", transform_correctness},
        {"channel matrix vs convolution", channel_oracle},
        {"CPP degeneracy", cpp_degeneracy},
        {"codec exhaustiveness", codec_exhaustive},
        {"path-count gain over AFDM", fig2_reproduction},
        {"gain over OFDM / OFDM-IM", fig3_reproduction},
        {"ML-MMSE loss vs ML", fig4_reproduction},
        {"noise whiteness and energy parity", whiteness_and_parity},
        {"determinism across parallelism", determinism},
    };
    std::vector<bool> selected(criteria.size(), argc == 1);
    for (int a = 1; a < argc; ++a) {
        const int k = std::atoi(argv[a]);
        if (k >= 1 && k <= static_cast<int>(criteria.size())) selected[k - 1] = true;
    }
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (!selected[i]) continue;
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        report(static_cast<int>(i + 1), criteria[i].first, v);
    }
    std::printf("%d of %zu criteria failed\n", failures,
                static_cast<std::size_t>(std::count(selected.begin(), selected.end(), true)));
    return failures ? 1 : 0;
}
