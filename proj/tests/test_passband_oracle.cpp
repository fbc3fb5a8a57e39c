#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fmcw/passband_oracle.hpp"

using namespace fmcw;

namespace {

ChirpConfig toy() {
    ChirpConfig c;
    c.f_start_hz = 1e6;
    c.f_stop_hz = 1.1e6;
    c.t_chirp_s = 10e-3;
    c.amplitude = 1.0;
    c.phi0_rad = 0.3;
    return c;
}

} // namespace

TEST_CASE("oracle: zero delay, zero offset measures DC") {
    PathResponse p;
    p.delay_s = 0.0;
    p.gain = 1.0;
    const OracleMeasurement m = passband_oracle(toy(), p, 0.0, 30e6);
    CHECK(std::abs(m.tone.freq_hz) < m.resolution_hz / 10.0);
    CHECK(m.tone.amp == Catch::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("oracle: 1 us delay matches the envelope model") {
    const ChirpConfig cfg = toy();
    PathResponse p;
    p.delay_s = 1e-6;
    p.gain = 0.7;
    const OracleMeasurement m = passband_oracle(cfg, p, 0.0, 30e6);
    const ToneParams model = dechirped_tone(p, 0.0, cfg);
    const double rbw = 1.0 / cfg.t_chirp_s;
    CHECK(std::abs(m.tone.freq_hz - model.freq_hz) < 0.01 * rbw);
    CHECK(std::abs(std::remainder(m.tone.phase_rad - model.phase_rad, 2.0 * M_PI)) < 1e-2);
    CHECK(m.tone.amp == Catch::Approx(model.amp).epsilon(1e-2));
}

TEST_CASE("oracle: an offset of 3/T shifts the measured beat by exactly -f_off") {
    const ChirpConfig cfg = toy();
    PathResponse p;
    p.delay_s = 3e-6;
    p.gain = 1.0;
    const double f_off = 3.0 / cfg.t_chirp_s;
    const OracleMeasurement base = passband_oracle(cfg, p, 0.0, 30e6);
    const OracleMeasurement shifted = passband_oracle(cfg, p, f_off, 30e6);
    CHECK(std::abs((shifted.tone.freq_hz - base.tone.freq_hz) + f_off) < base.resolution_hz / 10.0);
}

TEST_CASE("oracle equivalence suite: 20 randomized toy instances") {
    const OracleReport report = run_oracle_suite(20, 2024);
    INFO("max freq err (rel RBW): " << report.max_freq_err_rel_rbw);
    INFO("max phase err (rad): " << report.max_phase_err_rad);
    INFO("max amp err (rel): " << report.max_amp_rel_err);
    CHECK(report.pass);
    CHECK(report.max_freq_err_rel_rbw < 0.01);
    CHECK(report.max_phase_err_rad < 1e-2);
}

TEST_CASE("oracle catches a sign-convention bug (negative control)") {
    const OracleReport report = run_oracle_suite(6, 7, /*inject_sign_flip=*/true);
    CHECK_FALSE(report.pass);
}

TEST_CASE("oracle refuses an undersampled passband") {
    PathResponse p;
    p.delay_s = 1e-6;
    CHECK_THROWS_AS(passband_oracle(toy(), p, 0.0, 5e6), OracleResolutionError);
}
