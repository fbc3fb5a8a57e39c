#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fmcw/commands.hpp"
#include "fmcw/errors.hpp"
#include "fmcw/io.hpp"
#include "fmcw/scenario.hpp"

using namespace fmcw;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string write_noiseless_scenario(const fs::path& dir) {
    Scenario s = load_scenario("paper_10cm");
    s.noise.enabled = false;
    const fs::path p = dir / "noiseless.scn";
    std::ofstream out(p);
    out << scenario_to_text(s);
    return p.string();
}

} // namespace

TEST_CASE("cmd_run exit codes") {
    TempDir tmp("fmcw_cmd_run");
    std::ostringstream log;

    SECTION("missing scenario file is a schema error (exit 2)") {
        RunOptions opts;
        opts.scenario = (tmp.path / "missing.scn").string();
        opts.out_dir = tmp.path.string();
        CHECK(cmd_run(opts, log) == kExitUsage);
    }

    SECTION("malformed scenario is a schema error (exit 2)") {
        const fs::path bad = tmp.path / "bad.scn";
        std::ofstream(bad) << "[chirp]\nf_start_hz = oops\n";
        RunOptions opts;
        opts.scenario = bad.string();
        opts.out_dir = tmp.path.string();
        CHECK(cmd_run(opts, log) == kExitUsage);
    }

    SECTION("preset run succeeds and writes its artifacts") {
        RunOptions opts;
        opts.scenario = "paper_10cm";
        opts.out_dir = tmp.path.string();
        CHECK(cmd_run(opts, log) == kExitOk);
        CHECK(fs::exists(tmp.path / "spectrum_no_cancel.csv"));
        CHECK(fs::exists(tmp.path / "summary_no_cancel.txt"));
        const std::string csv = slurp(tmp.path / "spectrum_no_cancel.csv");
        CHECK(csv.rfind("bin,freq_hz,mag_dbm,phase_rad\n", 0) == 0);
        CHECK(csv.find("\r\n") == std::string::npos); // LF endings only
    }

    SECTION("--cancel without a calibration file is a simulation error (exit 3)") {
        RunOptions opts;
        opts.scenario = "paper_10cm";
        opts.out_dir = tmp.path.string();
        opts.cancel = true;
        CHECK(cmd_run(opts, log) == kExitSimulation);
    }
}

TEST_CASE("determinism: identical runs give byte-identical CSVs") {
    TempDir tmp1("fmcw_det1");
    TempDir tmp2("fmcw_det2");
    std::ostringstream log;

    RunOptions a;
    a.scenario = "paper_10cm";
    a.out_dir = tmp1.path.string();
    RunOptions b = a;
    b.out_dir = tmp2.path.string();
    REQUIRE(cmd_run(a, log) == kExitOk);
    REQUIRE(cmd_run(b, log) == kExitOk);
    CHECK(slurp(tmp1.path / "spectrum_no_cancel.csv") ==
          slurp(tmp2.path / "spectrum_no_cancel.csv"));
}

TEST_CASE("calibrate then run --cancel reproduces the suppression exactly (noiseless)") {
    TempDir tmp("fmcw_roundtrip");
    std::ostringstream log;
    const std::string scn = write_noiseless_scenario(tmp.path);

    CalibrateOptions cal;
    cal.scenario = scn;
    cal.out_dir = tmp.path.string();
    REQUIRE(cmd_calibrate(cal, log) == kExitOk);
    CHECK(fs::exists(tmp.path / "calibration.txt"));
    CHECK(fs::exists(tmp.path / "step1_offset_sweep.csv"));
    CHECK(fs::exists(tmp.path / "step3_phase_sweep.csv"));

    RunOptions run;
    run.scenario = scn;
    run.out_dir = tmp.path.string();
    run.cancel = true;
    REQUIRE(cmd_run(run, log) == kExitOk);

    // Pull suppression_db out of both summaries; noiseless mode must agree exactly.
    auto extract = [&](const fs::path& p) {
        const std::string text = slurp(p);
        const auto pos = text.find("suppression_db = ");
        REQUIRE(pos != std::string::npos);
        return std::stod(text.substr(pos + 17));
    };
    const double from_cal = extract(tmp.path / "summary_calibrate.txt");
    const double from_run = extract(tmp.path / "summary_cancel.txt");
    CHECK(from_run == Catch::Approx(from_cal).margin(1e-9));
    CHECK(from_cal >= 40.0);
}

TEST_CASE("cmd_calibrate on a leakage-free scenario exits 4") {
    TempDir tmp("fmcw_noleak");
    std::ostringstream log;
    Scenario s = load_scenario("paper_10cm");
    s.leakage.clear();
    s.targets.clear();
    const fs::path p = tmp.path / "empty.scn";
    std::ofstream(p) << scenario_to_text(s);

    CalibrateOptions cal;
    cal.scenario = p.string();
    cal.out_dir = tmp.path.string();
    CHECK(cmd_calibrate(cal, log) == kExitCalibration);
    CHECK(log.str().find("no leakage found") != std::string::npos);
}

TEST_CASE("cmd_calibrate multipath writes one tone per path") {
    TempDir tmp("fmcw_mp");
    std::ostringstream log;
    CalibrateOptions cal;
    cal.scenario = "paper_3path";
    cal.out_dir = tmp.path.string();
    cal.multipath = true;
    REQUIRE(cmd_calibrate(cal, log) == kExitOk);
    const std::string text = slurp(tmp.path / "calibration.txt");
    std::size_t tones = 0;
    for (std::size_t pos = 0; (pos = text.find("[tone]", pos)) != std::string::npos; ++pos) {
        ++tones;
    }
    CHECK(tones == 3);
}

TEST_CASE("cmd_sweep") {
    TempDir tmp("fmcw_sweep");
    std::ostringstream log;

    SECTION("zero steps rejected") {
        SweepOptions opts;
        opts.scenario = "paper_10cm";
        opts.param = "phase_error";
        opts.steps = 0;
        opts.out_dir = tmp.path.string();
        CHECK(cmd_sweep(opts, log) == kExitUsage);
    }

    SECTION("unknown parameter rejected") {
        SweepOptions opts;
        opts.scenario = "paper_10cm";
        opts.param = "warp_factor";
        opts.steps = 3;
        opts.out_dir = tmp.path.string();
        CHECK(cmd_sweep(opts, log) == kExitUsage);
    }

    SECTION("phase error sweep follows the 2*sin(delta/2) law") {
        SweepOptions opts;
        opts.scenario = "paper_10cm";
        opts.param = "phase_error";
        opts.from = -0.3;
        opts.to = 0.3;
        opts.steps = 7;
        opts.out_dir = tmp.path.string();
        REQUIRE(cmd_sweep(opts, log) == kExitOk);

        std::ifstream csv(tmp.path / "sweep_phase_error.csv");
        std::string line;
        std::getline(csv, line); // header
        while (std::getline(csv, line)) {
            const auto comma = line.find(',');
            const double delta = std::stod(line.substr(0, comma));
            const double residual_db = std::stod(line.substr(comma + 1));
            if (std::abs(delta) > 1e-9) {
                const double expected = 20.0 * std::log10(2.0 * std::sin(std::abs(delta) / 2.0));
                CHECK(residual_db == Catch::Approx(expected).margin(1e-3));
            } else {
                CHECK(residual_db < -200.0);
            }
        }
    }

    SECTION("target range sweep follows R^-4 within 0.1 dB") {
        TempDir local("fmcw_sweep_r4");
        const std::string scn = write_noiseless_scenario(local.path);
        SweepOptions opts;
        opts.scenario = scn;
        opts.param = "target_range";
        opts.from = 0.05;
        opts.to = 0.5;
        opts.steps = 6;
        opts.out_dir = local.path.string();
        REQUIRE(cmd_sweep(opts, log) == kExitOk);

        std::ifstream csv(local.path / "sweep_target_range.csv");
        std::string line;
        std::getline(csv, line);
        std::vector<std::pair<double, double>> rows;
        while (std::getline(csv, line)) {
            const auto comma = line.find(',');
            rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        }
        REQUIRE(rows.size() == 6);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double expected_delta =
                -40.0 * std::log10(rows[i].first / rows[0].first);
            CHECK(rows[i].second - rows[0].second ==
                  Catch::Approx(expected_delta).margin(0.1));
        }
    }
}

TEST_CASE("cmd_oracle_check") {
    std::ostringstream log;

    SECTION("zero cases warns and passes") {
        OracleOptions opts;
        opts.cases = 0;
        CHECK(cmd_oracle_check(opts, log) == kExitOk);
        CHECK(log.str().find("no cases") != std::string::npos);
    }

    SECTION("sign-flip fixture fails with exit 5") {
        OracleOptions opts;
        opts.cases = 6;
        opts.seed = 7;
        opts.inject_sign_flip = true;
        CHECK(cmd_oracle_check(opts, log) == kExitOracle);
    }
}

TEST_CASE("output directory resolution: flag, then environment, then default") {
    TempDir tmp("fmcw_envdir");
    const std::string env_dir = (tmp.path / "via_env").string();
    setenv("FMCWSIM_OUT_DIR", env_dir.c_str(), 1);
    CHECK(resolve_out_dir("") == env_dir);
    CHECK(fs::exists(env_dir));

    const std::string flag_dir = (tmp.path / "via_flag").string();
    CHECK(resolve_out_dir(flag_dir) == flag_dir);
    unsetenv("FMCWSIM_OUT_DIR");
}

TEST_CASE("config validation edges") {
    DdsConfig dds;
    dds.table_len = 12345; // not a power of two
    CHECK_THROWS_AS(dds.validate(), ScenarioError);

    AdcConfig adc;
    adc.bits = 4;
    CHECK_THROWS_AS(adc.validate(), ScenarioError);
    adc.bits = 32;
    CHECK_THROWS_AS(adc.validate(), ScenarioError);

    CombinerModel comb;
    comb.insertion_loss_db = 2.0; // equal-split combiner cannot beat 3 dB
    CHECK_THROWS_AS(comb.validate(), ScenarioError);
}

TEST_CASE("run summary formatting") {
    RunSummary s;
    s.suppression_db = {52.25};
    s.residual_bin_dbm = -76.0;
    s.rf_residual_dbm = -std::numeric_limits<double>::infinity();
    s.tx_offset_hz = 2288.818359375;
    s.clipped = false;
    s.wall_time_s = 0.125;
    std::ostringstream out;
    write_run_summary(out, s);
    const std::string text = out.str();
    CHECK(text.find("suppression_db = 52.25\n") != std::string::npos);
    CHECK(text.find("rf_residual_dbm = below -200 dBm\n") != std::string::npos);
    CHECK(text.find("clipped = false\n") != std::string::npos);

    RunSummary none;
    std::ostringstream out2;
    write_run_summary(out2, none);
    CHECK(out2.str().find("suppression_db = none\n") != std::string::npos);
}
