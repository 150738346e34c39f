#include "afdm_pim/channel.hpp"
#include "afdm_pim/detectors.hpp"
#include "afdm_pim/schemes.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace afdm_pim;

namespace {

constexpr double kPi = std::numbers::pi;

Bits random_bits(std::size_t n, std::mt19937_64& rng) {
    Bits b(n);
    for (auto& v : b) v = static_cast<std::uint8_t>(rng() & 1);
    return b;
}

void expect_noiseless_round_trip(const Codebook& cb, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 20; ++t) {
        const Bits bits = random_bits(cb.bits_per_frame(), rng);
        const auto ch = sample_channel(ChannelSpec{3, static_cast<unsigned>(cb.cp_len()), 1}, cb.N(), rng);
        const cvec r = apply_channel_timedomain(cb.modulate(bits), ch, rng, 0.0);
        EXPECT_EQ(ml_detect(cb, r, build_time_matrix(ch, cb.chirp_config(0))).bits, bits) << cb.name();
    }
}

}  // namespace

TEST(Codebook, PimModulateMatchesCodecPipeline) {
    const PimConfig pc(8, 2, 2);
    const Codebook cb = make_afdm_pim_codebook(pc, 5.0 / 16.0, 4);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        const Bits bits = random_bits(16, rng);
        const auto [groups, f] = encode_frame(bits, pc);
        const ChirpConfig cfg{8, 5.0 / 16.0, f.c2, 4};
        const auto tx = cb.modulate(bits);
        EXPECT_LT((tx.body - idaft(f.x, cfg)).norm(), 1e-14);
        EXPECT_LT((tx.body - oracle::direct_idaft(f.x, cfg.c1, cfg.c2)).norm(), 1e-12);
        EXPECT_EQ(cb.join(cb.split(bits)), bits);
    }
}

TEST(Codebook, SplitJoinLayout) {
    const Codebook cb = make_afdm_pim_codebook(PimConfig(8, 2, 2), 0.1, 2);
    // group 0: data 1010, index 0011 ; group 1: data 0000, index 0100
    const Bits bits{1, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0};
    const Codeword cw = cb.split(bits);
    EXPECT_EQ(cw.words, (std::vector<std::uint64_t>{0b1010, 0}));
    EXPECT_EQ(cw.pattern, 0b00110100u);
    EXPECT_EQ(cb.pattern_words(cw.pattern), (std::vector<std::uint64_t>{3, 4}));
    EXPECT_THROW(cb.split(Bits(15, 0)), std::invalid_argument);
}

TEST(Afdm, ClassicQpskBudgetAndRoundTrip) {
    const Codebook cb = make_afdm_codebook(8, 2, 4, kPi / 2, 5.0 / 16.0, 4);
    EXPECT_EQ(cb.bits_per_frame(), 16u);
    EXPECT_DOUBLE_EQ(cb.spectral_efficiency(), 2.0);
    EXPECT_EQ(cb.pattern_count(), 1u);
    expect_noiseless_round_trip(cb, 2);
}

// Classic AFDM is AFDM-PIM with single-subcarrier groups (b2 = 0) and a
// one-element pre-chirp set.
TEST(Afdm, EquivalentToDegeneratePim) {
    const Codebook afdm = make_afdm_codebook(8, 8, 4, kPi / 2, 5.0 / 16.0, 4);
    const Codebook pim = make_afdm_pim_codebook(PimConfig(8, 8, 4, {kPi / 2}), 5.0 / 16.0, 4);
    ASSERT_EQ(pim.bits_per_frame(), afdm.bits_per_frame());
    std::mt19937_64 rng_a(3), rng_b(3);
    for (int t = 0; t < 20; ++t) {
        const Bits bits = random_bits(16, rng_a);
        random_bits(16, rng_b);
        const auto ch_a = sample_channel(ChannelSpec{3, 4, 2}, 8, rng_a);
        const auto ch_b = sample_channel(ChannelSpec{3, 4, 2}, 8, rng_b);
        const auto ta = afdm.modulate(bits), tb = pim.modulate(bits);
        EXPECT_EQ(ta.body, tb.body);
        const cvec ra = apply_channel_timedomain(ta, ch_a, rng_a, 0.2);
        const cvec rb = apply_channel_timedomain(tb, ch_b, rng_b, 0.2);
        EXPECT_EQ(ra, rb);
        EXPECT_EQ(ml_detect(afdm, ra, build_time_matrix(ch_a, afdm.chirp_config(0))).bits,
                  ml_detect(pim, rb, build_time_matrix(ch_b, pim.chirp_config(0))).bits);
    }
}

TEST(Ofdm, LtiSinglePathIsOneTapDiagonal) {
    const Codebook cb = make_ofdm_codebook(8, 2, 4, 2);
    const cmat H = build_time_matrix({{PathTap{{0.6, -0.3}, 2, 0}}}, cb.chirp_config(0));
    const cmat D = cb.daft_matrix_for(0);
    EXPECT_LT((D - dft_matrix(8)).norm(), 1e-15);
    const cmat Heff = build_effective_matrix(H, D);
    EXPECT_LT((Heff - cmat(Heff.diagonal().asDiagonal())).norm(), 1e-12);
}

TEST(Ofdm, BudgetAndRoundTrip) {
    const Codebook cb = make_ofdm_codebook(8, 2, 4, 1);
    EXPECT_DOUBLE_EQ(cb.spectral_efficiency(), 2.0);
    expect_noiseless_round_trip(cb, 4);
}

TEST(OfdmIm, BitAccounting) {
    const Codebook cb = make_ofdm_im_codebook(8, 4, 3, 4, 1);
    EXPECT_EQ(cb.groups()[0].alphabet_bits, 8u);  // 2 index + 3*2 data
    EXPECT_DOUBLE_EQ(cb.spectral_efficiency(), 2.0);
}

TEST(OfdmIm, AllZeroBitsActivateFirstPattern) {
    const Codebook cb = make_ofdm_im_codebook(8, 4, 3, 4, 1);
    const cvec x = cb.symbols(cb.split(Bits(16, 0)));
    const double a = std::sqrt(4.0 / 3.0) / std::sqrt(2.0);
    for (int g = 0; g < 2; ++g) {
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(x[4 * g + j] - cplx(a, a)), 0.0, 1e-15);
        EXPECT_EQ(x[4 * g + 3], cplx(0.0));
    }
}

TEST(OfdmIm, RoundTrip) { expect_noiseless_round_trip(make_ofdm_im_codebook(8, 4, 3, 4, 1), 5); }

TEST(OfdmIm, Errors) {
    EXPECT_THROW(make_ofdm_im_codebook(8, 3, 2, 4, 1), std::invalid_argument);
    EXPECT_THROW(make_ofdm_im_codebook(8, 4, 5, 4, 1), std::invalid_argument);
}

// Average transmit energy per frame equals N for every scheme: exact average
// over the whole codebook.
TEST(EnergyParity, AllSchemesAverageN) {
    const std::vector<Codebook> books{
        make_afdm_pim_codebook(PimConfig(8, 2, 2), 5.0 / 16.0, 4), make_afdm_pim_codebook(PimConfig(8, 4, 2), 5.0 / 16.0, 2),
        make_afdm_codebook(8, 2, 4, kPi / 2, 5.0 / 16.0, 4), make_ofdm_codebook(8, 2, 4, 1),
        make_ofdm_im_codebook(8, 4, 3, 4, 1)};
    for (const auto& cb : books) {
        double acc = 0.0;
        const std::uint64_t count = std::uint64_t{1} << cb.bits_per_frame();
        for (std::uint64_t w = 0; w < count; ++w) {
            Bits b;
            word_to_bits(w, cb.bits_per_frame(), b);
            acc += cb.modulate(b).body.squaredNorm();
        }
        EXPECT_NEAR(acc / static_cast<double>(count), 8.0, 1e-9) << cb.name();
    }
}

TEST(Scheme, NamesRoundTrip) {
    for (auto k : {SchemeKind::AfdmPim, SchemeKind::Afdm, SchemeKind::Ofdm, SchemeKind::OfdmIm})
        EXPECT_EQ(scheme_from_string(to_string(k)), k);
    EXPECT_THROW(scheme_from_string("otfs"), std::invalid_argument);
}
