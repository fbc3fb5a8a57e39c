#pragma once

#include <cstdint>
#include <vector>

#include "fmcw/channel.hpp"
#include "fmcw/dsp.hpp"
#include "fmcw/frontend.hpp"
#include "fmcw/scenario.hpp"
#include "fmcw/signal_model.hpp"

namespace fmcw {

struct ChirpOptions {
    TxOffsetSetting tx_offset{};
    const ReplicaProgram* replica = nullptr; // nullptr = replica path off
    Window window = Window::rectangular;
};

struct ChirpResult {
    Spectrum spectrum;
    std::vector<cplx> decimated; // fixed-point samples feeding the FFT (pre-window)
    double rf_residual_dbm = 0.0;
    bool clipped = false;
    std::uint64_t chirp_index = 0;
};

// One-chirp experiment engine. Each run_chirp consumes the next chirp index, so
// noise realizations are fresh per chirp and drift advances, while the whole
// sequence stays reproducible from the scenario seed.
class Simulator {
public:
    explicit Simulator(Scenario scn);

    const Scenario& scenario() const { return scn_; }
    double rbw_hz() const { return scn_.rbw_hz(); }
    std::size_t fft_length() const { return scn_.fft_length(); }
    double slope_hz_per_s() const { return chirp_slope(scn_.chirp); }
    // dBm value of a unit-amplitude envelope (the spectrum power reference).
    double ref_power_dbm() const;
    // Theoretical noise floor of one spectrum bin at the ADC reference plane
    // (thermal + NF through the combiner loss); -inf when noise is disabled.
    double noise_bin_floor_dbm() const;

    // Known chain constants for referring spectrum readings back to the RX input:
    // combiner signal-port gain times the decimation filter response at freq_hz.
    double rx_chain_gain(double freq_hz) const;
    double replica_port_ratio() const; // signal-port gain / replica-port gain

    ChirpResult run_chirp(const ChirpOptions& opts);

    // Model-truth de-chirped tones (leakages then targets) for a given offset and
    // chirp index; what an ideal estimator would recover.
    std::vector<ToneParams> ground_truth_tones(const TxOffsetSetting& tx_offset,
                                               std::uint64_t chirp_index) const;

    std::uint64_t chirps_run() const { return chirp_count_; }

private:
    Scenario scn_;
    std::vector<PathResponse> base_paths_;
    std::uint64_t chirp_count_ = 0;
};

} // namespace fmcw
