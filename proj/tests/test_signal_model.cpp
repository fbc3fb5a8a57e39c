#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fmcw/signal_model.hpp"

using namespace fmcw;

namespace {

ChirpConfig paper_chirp() {
    ChirpConfig c;
    c.f_start_hz = 135e9;
    c.f_stop_hz = 145e9;
    c.t_chirp_s = 100e-6;
    c.amplitude = 1.0;
    return c;
}

ChirpConfig toy_chirp() {
    ChirpConfig c;
    c.f_start_hz = 1e6;
    c.f_stop_hz = 1.1e6;
    c.t_chirp_s = 1e-3;
    c.amplitude = 1.0;
    return c;
}

} // namespace

TEST_CASE("chirp_slope evaluates B/T") {
    CHECK(chirp_slope(paper_chirp()) == 1.0e14);

    ChirpConfig unit;
    unit.f_start_hz = 7e6;
    unit.f_stop_hz = 7e6 + 1.0;
    unit.t_chirp_s = 1.0;
    CHECK(chirp_slope(unit) == 1.0);

    CHECK(chirp_slope(toy_chirp()) == 1.0e8);
}

TEST_CASE("chirp config invariants") {
    ChirpConfig c = paper_chirp();
    CHECK_NOTHROW(c.validate());

    c.f_stop_hz = c.f_start_hz; // not an up-chirp
    CHECK_THROWS_AS(c.validate(), ScenarioError);

    c = paper_chirp();
    c.t_chirp_s = 0.0;
    CHECK_THROWS_AS(c.validate(), ScenarioError);

    c = paper_chirp();
    c.amplitude = -1.0;
    CHECK_THROWS_AS(c.validate(), ScenarioError);
}

TEST_CASE("beat_frequency matches the range law") {
    const ChirpConfig c = paper_chirp();
    CHECK(beat_frequency(0.0, c) == 0.0);

    // 2*R*B/(c*T) with the exact speed of light, evaluated independently.
    const double expected = 2.0 * 0.10 * 10e9 / (299792458.0 * 100e-6);
    CHECK(beat_frequency(0.10, c) == Catch::Approx(expected).epsilon(1e-12));
    CHECK(beat_frequency(0.10, c) == Catch::Approx(66712.819).epsilon(1e-6));

    // Linear in range.
    CHECK(beat_frequency(0.20, c) == Catch::Approx(2.0 * beat_frequency(0.10, c)).epsilon(1e-12));
}

TEST_CASE("dechirped_tone frequency, amplitude and phase") {
    const ChirpConfig c = paper_chirp();

    SECTION("zero delay identity") {
        PathResponse p;
        p.delay_s = 0.0;
        p.gain = 1.0;
        const ToneParams t = dechirped_tone(p, 0.0, c);
        CHECK(t.freq_hz == 0.0);
        CHECK(t.amp == 1.0);
        CHECK(t.phase_rad == 0.0);
    }

    SECTION("one DDS delay step lands one DDS frequency step away") {
        PathResponse p;
        p.delay_s = 1.53e-12;
        p.gain = 0.5;
        const ToneParams t = dechirped_tone(p, 0.0, c);
        CHECK(t.freq_hz == Catch::Approx(153.0).epsilon(1e-12));
        CHECK(t.amp == 0.5);
        const double expected_phase =
            std::remainder(-2.0 * M_PI * 135e9 * 1.53e-12 + M_PI * 1e14 * 1.53e-12 * 1.53e-12,
                           2.0 * M_PI);
        CHECK(t.phase_rad == Catch::Approx(expected_phase).margin(1e-12));
    }

    SECTION("100 ps delay beats at 10 kHz") {
        PathResponse p;
        p.delay_s = 100e-12;
        const ToneParams t = dechirped_tone(p, 0.0, c);
        CHECK(t.freq_hz == Catch::Approx(10e3).epsilon(1e-12));
    }

    SECTION("out-of-band tone rejected") {
        PathResponse p;
        p.delay_s = 100e-9; // 10 MHz beat
        CHECK_THROWS_AS(dechirped_tone(p, 0.0, c, 5e6), ToneOutOfBand);
    }
}

TEST_CASE("offset-shift invariance: the TX offset subtracts exactly") {
    const ChirpConfig c = paper_chirp();
    std::mt19937_64 rng(42);
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1p-53);
    };
    for (int i = 0; i < 50; ++i) {
        PathResponse p;
        p.delay_s = uniform(0.0, 2e-9);
        p.gain = uniform(0.01, 1.0);
        const double f_off = uniform(-50e3, 50e3);
        const ToneParams shifted = dechirped_tone(p, f_off, c);
        const ToneParams base = dechirped_tone(p, 0.0, c);
        CHECK(shifted.freq_hz == base.freq_hz - f_off); // bitwise: same expression shape
    }
}

TEST_CASE("delay/offset duality: f_off = k*dtau mimics extra delay") {
    const ChirpConfig c = paper_chirp();
    const double k = chirp_slope(c);
    std::mt19937_64 rng(43);
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1p-53);
    };
    for (int i = 0; i < 50; ++i) {
        PathResponse p;
        p.delay_s = uniform(0.0, 1e-9);
        const double dtau = uniform(-p.delay_s, 1e-9);
        PathResponse longer = p;
        longer.delay_s = p.delay_s + dtau;
        const double f_equiv = dechirped_tone(p, -k * dtau, c).freq_hz;
        const double f_real = dechirped_tone(longer, 0.0, c).freq_hz;
        CHECK(f_equiv == Catch::Approx(f_real).margin(1e-6));
    }
}

TEST_CASE("synthesize_beat_signal") {
    SECTION("empty tone list renders zeros") {
        const auto x = synthesize_beat_signal({}, 1e6, 64);
        REQUIRE(x.size() == 64);
        for (const cplx& v : x) {
            CHECK(v == cplx{0.0, 0.0});
        }
    }

    SECTION("single unit tone has unit modulus everywhere") {
        ToneParams t{1234.0, 1.0, 0.7};
        const auto x = synthesize_beat_signal(std::span(&t, 1), 1e6, 256);
        for (const cplx& v : x) {
            CHECK(std::abs(v) == Catch::Approx(1.0).epsilon(1e-12));
        }
    }

    SECTION("superposition is bit-exact") {
        ToneParams t1{1000.0, 0.5, 0.1};
        ToneParams t2{2500.0, 0.25, -1.2};
        ToneParams both[] = {t1, t2};
        const auto x12 = synthesize_beat_signal(both, 1e6, 128);
        const auto x1 = synthesize_beat_signal(std::span(&t1, 1), 1e6, 128);
        const auto x2 = synthesize_beat_signal(std::span(&t2, 1), 1e6, 128);
        for (std::size_t m = 0; m < 128; ++m) {
            CHECK(x12[m] == x1[m] + x2[m]);
        }
    }

    SECTION("tones at or above Nyquist alias") {
        ToneParams t{0.5e6, 1.0, 0.0};
        CHECK_THROWS_AS(synthesize_beat_signal(std::span(&t, 1), 1e6, 16), AliasError);
        t.freq_hz = -0.6e6;
        CHECK_THROWS_AS(synthesize_beat_signal(std::span(&t, 1), 1e6, 16), AliasError);
    }
}
