#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fmcw/commands.hpp"
#include "fmcw/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"FMCW radar front-end simulator with RF-domain leakage cancellation"};
    app.require_subcommand(1);

    fmcw::RunOptions run_opts;
    std::string window_name = "rect";
    auto* run = app.add_subcommand("run", "Simulate one chirp and emit spectrum + summary");
    run->add_option("scenario", run_opts.scenario, "Scenario file or bundled preset name")
        ->required();
    run->add_flag("--cancel,!--no-cancel", run_opts.cancel,
                  "Apply the stored calibration (TX offset + replica); default --no-cancel");
    run->add_option("--window", window_name, "FFT window: rect or hann")
        ->check(CLI::IsMember({"rect", "hann"}));
    run->add_option("--out-dir", run_opts.out_dir, "Output directory");
    run->add_option("--calibration", run_opts.calibration_path,
                    "Calibration file (default <out-dir>/calibration.txt)");

    fmcw::CalibrateOptions cal_opts;
    auto* cal = app.add_subcommand("calibrate", "Run the leakage estimation and cancellation "
                                                "procedure; persist the result");
    cal->add_option("scenario", cal_opts.scenario, "Scenario file or bundled preset name")
        ->required();
    cal->add_flag("--multipath", cal_opts.multipath, "Greedy multi-tone calibration");
    cal->add_option("--max-paths", cal_opts.max_paths, "Tone budget for --multipath")
        ->check(CLI::PositiveNumber);
    cal->add_option("--target-bin", cal_opts.target_bin,
                    "Alignment bin (move up to escape 1/f noise)")
        ->check(CLI::PositiveNumber);
    cal->add_option("--chirps-averaged", cal_opts.chirps_averaged,
                    "Chirps averaged in the estimation step")
        ->check(CLI::PositiveNumber);
    cal->add_option("--out-dir", cal_opts.out_dir, "Output directory");

    fmcw::SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Sweep a scenario parameter and emit metrics");
    sweep->add_option("scenario", sweep_opts.scenario, "Scenario file or bundled preset name")
        ->required();
    sweep->add_option("--param", sweep_opts.param,
                      "phase_error | target_range | leakage_delay | leakage_coupling")
        ->required();
    sweep->add_option("--from", sweep_opts.from, "First value")->required();
    sweep->add_option("--to", sweep_opts.to, "Last value")->required();
    sweep->add_option("--steps", sweep_opts.steps, "Number of sweep points")->required();
    sweep->add_option("--out-dir", sweep_opts.out_dir, "Output directory");

    fmcw::OracleOptions oracle_opts;
    auto* oracle = app.add_subcommand(
        "oracle-check", "Envelope model vs brute-force passband de-chirp equivalence suite");
    oracle->add_option("--cases", oracle_opts.cases, "Number of randomized cases");
    oracle->add_option("--seed", oracle_opts.seed, "Case generator seed");
    oracle
        ->add_flag("--inject-sign-flip", oracle_opts.inject_sign_flip,
                   "Negate the model's offset convention (negative control; must fail)")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fmcw::kExitUsage;
    }

    if (run->parsed()) {
        run_opts.window = window_name == "hann" ? fmcw::Window::hann : fmcw::Window::rectangular;
        return fmcw::cmd_run(run_opts, std::cout);
    }
    if (cal->parsed()) {
        return fmcw::cmd_calibrate(cal_opts, std::cout);
    }
    if (sweep->parsed()) {
        return fmcw::cmd_sweep(sweep_opts, std::cout);
    }
    return fmcw::cmd_oracle_check(oracle_opts, std::cout);
}
