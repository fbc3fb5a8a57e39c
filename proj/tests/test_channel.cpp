#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fmcw/channel.hpp"
#include "fmcw/dsp.hpp"
#include "fmcw/scenario.hpp"

using namespace fmcw;

namespace {

LinkBudget paper_budget() {
    LinkBudget lb;
    lb.tx_power_dbm = 10.0;
    lb.tx_ant_gain_dbi = 0.0;
    lb.rx_ant_gain_dbi = 0.0;
    lb.nf_db = 15.0;
    lb.carrier_hz = 140e9;
    return lb;
}

Scenario paper_scenario() { return load_scenario("paper_10cm"); }

} // namespace

TEST_CASE("radar range equation at the hand-checked operating point") {
    TargetSpec t{0.10, -40.0};
    // Independent evaluation: lambda = c/140 GHz, sigma = 1e-4 m^2,
    // Pr = 10 + 10*log10(lambda^2*sigma/((4pi)^3 * 0.1^4)) = -76.3624 dBm.
    CHECK(target_received_power_dbm(t, paper_budget()) ==
          Catch::Approx(-76.3624425757).epsilon(1e-9));
}

TEST_CASE("range equation scaling laws") {
    const LinkBudget lb = paper_budget();
    TargetSpec t{0.10, -40.0};
    const double base = target_received_power_dbm(t, lb);

    t.range_m = 0.20; // fourth-power law
    CHECK(target_received_power_dbm(t, lb) ==
          Catch::Approx(base - 40.0 * std::log10(2.0)).epsilon(1e-12));

    t.range_m = 0.10;
    t.rcs_dbsm = -30.0; // linear in sigma
    CHECK(target_received_power_dbm(t, lb) == Catch::Approx(base + 10.0).epsilon(1e-12));
}

TEST_CASE("target power strictly decreases with range") {
    const LinkBudget lb = paper_budget();
    double prev = 1e9;
    for (double r = 0.05; r <= 0.5; r += 0.01) {
        const double p = target_received_power_dbm(TargetSpec{r, -40.0}, lb);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("leakage amplitude from coupling") {
    const LinkBudget lb = paper_budget();
    CHECK(leakage_amplitude(LeakageSpec{0.0, -30.0}, lb) ==
          Catch::Approx(std::pow(10.0, -30.0 / 20.0)).epsilon(1e-15));
    // -30 dB coupling at 10 dBm TX puts -20 dBm at the RX input.
    const double rx_dbm =
        lb.tx_power_dbm + 20.0 * std::log10(leakage_amplitude(LeakageSpec{0.0, -30.0}, lb));
    CHECK(rx_dbm == Catch::Approx(-20.0).margin(1e-12));
    CHECK(leakage_amplitude(LeakageSpec{0.0, -0.0}, lb) == 1.0);
    CHECK(leakage_amplitude(LeakageSpec{0.0, -6.02}, lb) == Catch::Approx(0.5).margin(1e-4));
}

TEST_CASE("noise_floor_dbm") {
    CHECK(noise_floor_dbm(15.0, 10e3) == Catch::Approx(-119.0).margin(1e-12));
    CHECK(noise_floor_dbm(0.0, 1.0) == Catch::Approx(-174.0).margin(1e-12));
    CHECK(noise_floor_dbm(3.0, 1e4) - noise_floor_dbm(3.0, 1e3) ==
          Catch::Approx(10.0).margin(1e-12));
}

TEST_CASE("scenario_to_paths ordering and contents") {
    Scenario s = paper_scenario();

    SECTION("empty scenario gives no paths") {
        s.leakage.clear();
        s.targets.clear();
        CHECK(scenario_to_paths(s).empty());
    }

    SECTION("paper case: leakage first, then target with round-trip delay") {
        const auto paths = scenario_to_paths(s);
        REQUIRE(paths.size() == 2);
        CHECK(paths[0].kind == PathKind::leakage);
        CHECK(paths[0].delay_s == 123.4e-12);
        CHECK(paths[1].kind == PathKind::target);
        CHECK(paths[1].delay_s == Catch::Approx(2.0 * 0.10 / 299792458.0).epsilon(1e-12));
        CHECK(paths[1].delay_s == Catch::Approx(0.667e-9).epsilon(1e-3));
    }

    SECTION("multiple leakage paths sorted by delay") {
        s.leakage = {{400e-12, -45.0}, {123.4e-12, -30.0}, {250e-12, -40.0}};
        s.targets.clear();
        const auto paths = scenario_to_paths(s);
        REQUIRE(paths.size() == 3);
        CHECK(paths[0].delay_s == 123.4e-12);
        CHECK(paths[1].delay_s == 250e-12);
        CHECK(paths[2].delay_s == 400e-12);
    }

    SECTION("identical delays are ambiguous") {
        s.leakage = {{123.4e-12, -30.0}, {123.4e-12, -40.0}};
        CHECK_THROWS_AS(scenario_to_paths(s), ScenarioError);
    }

    SECTION("deterministic and order-stable") {
        const auto a = scenario_to_paths(s);
        const auto b = scenario_to_paths(s);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].delay_s == b[i].delay_s);
            CHECK(a[i].gain == b[i].gain);
        }
    }
}

TEST_CASE("apply_drift") {
    std::vector<PathResponse> paths = {
        {123.4e-12, 0.0316, PathKind::leakage, 0.0},
        {0.667e-9, 1e-4, PathKind::target, 0.0},
    };

    SECTION("disabled drift is the identity") {
        DriftConfig d;
        const auto out = apply_drift(paths, 17, d);
        CHECK(out[0].gain == paths[0].gain);
        CHECK(out[0].phase_offset_rad == 0.0);
    }

    SECTION("linear phase accumulation on leakage only") {
        DriftConfig d{true, 0.01, 0.0};
        const auto out = apply_drift(paths, 10, d);
        CHECK(out[0].phase_offset_rad == Catch::Approx(0.1).epsilon(1e-12));
        CHECK(out[1].phase_offset_rad == 0.0);
    }

    SECTION("gain drift in dB per chirp") {
        DriftConfig d{true, 0.0, 0.1};
        const auto out = apply_drift(paths, 20, d);
        CHECK(out[0].gain ==
              Catch::Approx(paths[0].gain * std::pow(10.0, 2.0 / 20.0)).epsilon(1e-12));
        CHECK(out[1].gain == paths[1].gain);
    }
}

TEST_CASE("noise realization matches the configured floor within 0.5 dB") {
    const Scenario s = paper_scenario();
    const LinkBudget lb = s.link_budget;
    NoiseConfig cfg;
    const double fs = 100e6;
    const std::size_t n = 10000;
    const double rbw = fs / static_cast<double>(n);

    // Average the power of a few bins over 100 seeds; each bin should carry
    // noise_floor_dbm(nf, rbw) at the RX input plane.
    double acc = 0.0;
    int count = 0;
    const std::size_t probe_bins[] = {7, 123, 4999, 7777};
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto noise = make_noise(cfg, lb, fs, n, 9000 + seed, seed);
        const Spectrum spec = range_fft(noise, Window::rectangular, fs, lb.tx_power_dbm);
        for (std::size_t k : probe_bins) {
            acc += std::norm(spec.bins[k]);
            ++count;
        }
    }
    const double mean_bin_dbm = lb.tx_power_dbm + 10.0 * std::log10(acc / count);
    const double expected = noise_floor_dbm(lb.nf_db, rbw);
    CHECK(mean_bin_dbm == Catch::Approx(expected).margin(0.5));
}

TEST_CASE("disabled noise renders zeros; same seed renders identical noise") {
    const LinkBudget lb = paper_budget();
    NoiseConfig off;
    off.enabled = false;
    for (const cplx& v : make_noise(off, lb, 1e6, 64, 1, 2)) {
        CHECK(v == cplx{0.0, 0.0});
    }

    NoiseConfig on;
    const auto a = make_noise(on, lb, 1e6, 256, 42, 7);
    const auto b = make_noise(on, lb, 1e6, 256, 42, 7);
    const auto c = make_noise(on, lb, 1e6, 256, 42, 8);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("flicker shaping lifts low-frequency bins and leaves the high floor") {
    const LinkBudget lb = paper_budget();
    NoiseConfig flick;
    flick.flicker_corner_hz = 1e6;
    const double fs = 10e6;
    const std::size_t n = 4096;

    double low = 0.0;
    double high = 0.0;
    double high_white = 0.0;
    NoiseConfig white;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto shaped = make_noise(flick, lb, fs, n, seed, 0);
        const auto plain = make_noise(white, lb, fs, n, seed, 0);
        const Spectrum a = range_fft(shaped, Window::rectangular, fs, 0.0);
        const Spectrum b = range_fft(plain, Window::rectangular, fs, 0.0);
        for (std::size_t k = 2; k < 20; ++k) {
            low += std::norm(a.bins[k]);
        }
        for (std::size_t k = 1500; k < 1540; ++k) {
            high += std::norm(a.bins[k]);
            high_white += std::norm(b.bins[k]);
        }
    }
    CHECK(10.0 * std::log10(low / (18.0 * 40)) >
          10.0 * std::log10(high / (40.0 * 40)) + 6.0);
    // Above the corner the shaped floor approaches the white floor.
    CHECK(10.0 * std::log10(high / high_white) < 2.0);
}
