#include <catch2/catch_amalgamated.hpp>

#include "nbrange/channel.hpp"
#include "nbrange/rng.hpp"

using namespace nbrange;

TEST_CASE("sample_sv_channel basics") {
    SVParams p;
    p.tau0_s = 20e-9;
    p.ray_rate_inv_s = 4e-9;
    p.rician_db = 3.0;

    const auto ch = sample_sv_channel(p, 123);
    REQUIRE(ch.paths() >= 1);
    CHECK(ch.delays_s[0] == 20e-9); // LoS delay is exact, distance 6 m
    for (int i = 1; i < ch.paths(); ++i) CHECK(ch.delays_s[i] > ch.delays_s[i - 1]);

    // Rician ratio holds per realization by construction
    double los = std::norm(ch.amplitudes[0]);
    double rest = 0.0;
    for (int i = 1; i < ch.paths(); ++i) rest += std::norm(ch.amplitudes[i]);
    CHECK(los / rest == Catch::Approx(std::pow(10.0, 0.3)).epsilon(1e-12));

    // unit total power
    CHECK(los + rest == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sample_sv_channel is deterministic in the seed") {
    SVParams p;
    const auto a = sample_sv_channel(p, 99);
    const auto b = sample_sv_channel(p, 99);
    const auto c = sample_sv_channel(p, 100);
    REQUIRE(a.paths() == b.paths());
    for (int i = 0; i < a.paths(); ++i) {
        CHECK(a.delays_s[i] == b.delays_s[i]);
        CHECK(a.amplitudes[i] == b.amplitudes[i]);
    }
    bool differs = (a.paths() != c.paths());
    for (int i = 0; !differs && i < a.paths(); ++i) differs = a.delays_s[i] != c.delays_s[i];
    CHECK(differs);
}

TEST_CASE("inter-ray gaps average to 1/lambda") {
    SVParams p;
    p.tau0_s = 20e-9;
    p.ray_rate_inv_s = 4e-9;
    // plenty of headroom so early gaps are untouched by the horizon cut
    p.max_paths = 64;

    double sum = 0.0;
    size_t count = 0;
    uint64_t seed = 1;
    while (count < 100000) {
        const auto ch = sample_sv_channel(p, seed++);
        const int usable = std::min(ch.paths() - 1, 8);
        for (int i = 1; i <= usable; ++i) {
            sum += ch.delays_s[i] - ch.delays_s[i - 1];
            ++count;
        }
    }
    const double mean = sum / count;
    CHECK(mean == Catch::Approx(4e-9).epsilon(0.02));
}

TEST_CASE("rician +60 dB is numerically single-path dominated") {
    SVParams p;
    p.rician_db = 60.0;
    const auto ch = sample_sv_channel(p, 4);
    double rest = 0.0;
    for (int i = 1; i < ch.paths(); ++i) rest += std::norm(ch.amplitudes[i]);
    CHECK(std::norm(ch.amplitudes[0]) / rest >= 0.99e6);
}

TEST_CASE("noise-free IQ product reproduces h^2") {
    SVParams p;
    const auto ch = sample_sv_channel(p, 17);
    ToneGrid grid;
    const auto cap = synthesize_iq(ch, grid, std::numeric_limits<double>::infinity(), 55);
    const auto h = channel_frequency_response(ch, grid);
    for (int k = 0; k < grid.num_tones; ++k) {
        const cdouble prod = cap.iq_initiator[k] * cap.iq_reflector[k];
        const cdouble want = h[k] * h[k];
        CHECK(std::abs(prod - want) <= 1e-13 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("Eq-style SNR normalization: single path, unit amplitude, 0 dB") {
    ChannelRealization ch;
    ch.amplitudes = {cdouble(1.0, 0.0)};
    ch.delays_s = {20e-9};
    ToneGrid grid;

    // N0 should be exactly 1; estimate it from the injected noise
    double acc = 0.0;
    size_t n = 0;
    for (uint64_t seed = 0; seed < 200; ++seed) {
        const auto noisy = synthesize_iq(ch, grid, 0.0, seed);
        const auto clean = synthesize_iq(ch, grid, std::numeric_limits<double>::infinity(), seed);
        for (int k = 0; k < grid.num_tones; ++k) {
            acc += std::norm(noisy.iq_initiator[k] - clean.iq_initiator[k]);
            acc += std::norm(noisy.iq_reflector[k] - clean.iq_reflector[k]);
            n += 2;
        }
    }
    CHECK(acc / n == Catch::Approx(1.0).epsilon(0.03));
}

TEST_CASE("empirical SNR at 20 dB over 1e5 tones") {
    SVParams p;
    ToneGrid grid;
    double noise_acc = 0.0;
    double sig_power_acc = 0.0;
    size_t tones = 0;
    uint64_t seed = 7000;
    while (tones < 100000) {
        const auto ch = sample_sv_channel(p, seed);
        const auto noisy = synthesize_iq(ch, grid, 20.0, seed);
        const auto clean = synthesize_iq(ch, grid, std::numeric_limits<double>::infinity(), seed);
        for (int k = 0; k < grid.num_tones; ++k) {
            noise_acc += 0.5 * (std::norm(noisy.iq_initiator[k] - clean.iq_initiator[k]) +
                                std::norm(noisy.iq_reflector[k] - clean.iq_reflector[k]));
            ++tones;
        }
        sig_power_acc += per_path_signal_power(ch) * grid.num_tones;
        ++seed;
    }
    const double snr_db = 10.0 * std::log10((sig_power_acc / tones) / (noise_acc / tones));
    CHECK(snr_db == Catch::Approx(20.0).margin(0.1));
}

TEST_CASE("gap preset 1: 8 unavailable of 80") {
    SVParams p;
    const auto ch = sample_sv_channel(p, 3);
    ToneGrid grid;
    auto cap = synthesize_iq(ch, grid, 20.0, 3);
    cap = apply_gap_map(cap, gap_preset(1), 0.0, 3);

    int avail = 0, interf = 0;
    for (int k = 0; k < grid.num_tones; ++k) {
        avail += cap.available[k];
        interf += cap.interfered[k];
    }
    CHECK(avail == 72);
    CHECK(interf == 0);
    for (int k : {0, 1, 2, 24, 25, 26, 78, 79}) {
        CHECK(!cap.available[k]);
        CHECK(cap.iq_initiator[k] == cdouble(0.0, 0.0));
    }
}

TEST_CASE("gap preset 5 has 11 blocks; preset 6 has 9") {
    CHECK(gap_preset(5).blocks.size() == 11);
    CHECK(gap_preset("gap6").blocks.size() == 9);

    int interfered_tones = 0;
    for (const auto& b : gap_preset(5).blocks)
        if (b.interfered) interfered_tones += b.width();
    CHECK(interfered_tones == 16); // {29:30, 32, 34:36, 38, 52:55, 58:59, 62:63, 65}
}

TEST_CASE("interfered tones keep a (corrupted) measurement") {
    SVParams p;
    const auto ch = sample_sv_channel(p, 5);
    ToneGrid grid;
    auto cap = synthesize_iq(ch, grid, 20.0, 5);
    cap = apply_gap_map(cap, gap_preset(2), 0.0, 5);
    for (int k = 27; k <= 29; ++k) {
        CHECK(!cap.available[k]);
        CHECK(cap.interfered[k]);
        CHECK(cap.iq_initiator[k] != cdouble(0.0, 0.0));
    }
}

TEST_CASE("empty gap map leaves the capture untouched") {
    SVParams p;
    const auto ch = sample_sv_channel(p, 6);
    ToneGrid grid;
    const auto cap = synthesize_iq(ch, grid, 20.0, 6);
    const auto same = apply_gap_map(cap, GapMap{}, 0.0, 6);
    for (int k = 0; k < grid.num_tones; ++k) {
        CHECK(same.iq_initiator[k] == cap.iq_initiator[k]);
        CHECK(same.iq_reflector[k] == cap.iq_reflector[k]);
        CHECK(same.available[k] == 1);
    }
}

TEST_CASE("gap application never touches tones outside the blocks") {
    SVParams p;
    ToneGrid grid;
    Rng rng(81);
    for (int rep = 0; rep < 10; ++rep) {
        const auto ch = sample_sv_channel(p, 900 + rep);
        const auto cap = synthesize_iq(ch, grid, 15.0, 900 + rep);
        GapMap gaps;
        int cursor = static_cast<int>(rng.uniform() * 10);
        while (cursor < grid.num_tones - 3) {
            const int w = 1 + static_cast<int>(rng.uniform() * 3);
            const int last = std::min(cursor + w - 1, grid.num_tones - 1);
            gaps.blocks.push_back({cursor, last, rng.uniform() < 0.5});
            cursor = last + 2 + static_cast<int>(rng.uniform() * 12);
        }
        const auto gapped = apply_gap_map(cap, gaps, -3.0, rep);
        std::vector<bool> in_gap(grid.num_tones, false);
        for (const auto& b : gaps.blocks)
            for (int k = b.first; k <= b.last; ++k) in_gap[k] = true;
        for (int k = 0; k < grid.num_tones; ++k) {
            if (in_gap[k]) {
                REQUIRE(!gapped.available[k]);
            } else {
                REQUIRE(gapped.available[k]);
                REQUIRE(gapped.iq_initiator[k] == cap.iq_initiator[k]);
                REQUIRE(gapped.iq_reflector[k] == cap.iq_reflector[k]);
            }
        }
    }
}

TEST_CASE("overlapping gap blocks are rejected") {
    SVParams p;
    const auto ch = sample_sv_channel(p, 8);
    ToneGrid grid;
    const auto cap = synthesize_iq(ch, grid, 20.0, 8);
    GapMap bad;
    bad.blocks = {{10, 14, false}, {14, 16, true}};
    CHECK_THROWS_AS(apply_gap_map(cap, bad, 0.0, 8), std::invalid_argument);
}

TEST_CASE("synthesis is deterministic and phase stream is SNR-independent") {
    SVParams p;
    const auto ch = sample_sv_channel(p, 15);
    ToneGrid grid;
    const auto a = synthesize_iq(ch, grid, 20.0, 77);
    const auto b = synthesize_iq(ch, grid, 20.0, 77);
    for (int k = 0; k < grid.num_tones; ++k) {
        CHECK(a.iq_initiator[k] == b.iq_initiator[k]);
        CHECK(a.iq_reflector[k] == b.iq_reflector[k]);
    }
}
