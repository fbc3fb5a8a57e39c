#include "fmcw/simulator.hpp"

#include <cmath>

namespace fmcw {

Simulator::Simulator(Scenario scn) : scn_(std::move(scn)) {
    scn_.validate();
    base_paths_ = scenario_to_paths(scn_);
}

double Simulator::ref_power_dbm() const {
    return scn_.link_budget.tx_power_dbm - amplitude_to_db(scn_.chirp.amplitude);
}

double Simulator::noise_bin_floor_dbm() const {
    if (!scn_.noise.enabled) {
        return -std::numeric_limits<double>::infinity();
    }
    return noise_floor_dbm(scn_.link_budget.nf_db, scn_.rbw_hz()) -
           scn_.combiner.insertion_loss_db;
}

double Simulator::rx_chain_gain(double freq_hz) const {
    return scn_.combiner.signal_port_gain() *
           decimation_gain(freq_hz, scn_.adc.fs_hz, scn_.adc.decimation);
}

double Simulator::replica_port_ratio() const {
    return scn_.combiner.signal_port_gain() / scn_.combiner.replica_port_gain();
}

std::vector<ToneParams> Simulator::ground_truth_tones(const TxOffsetSetting& tx_offset,
                                                      std::uint64_t chirp_index) const {
    const std::vector<PathResponse> paths = apply_drift(base_paths_, chirp_index, scn_.drift);
    const double band = scn_.decimated_rate_hz() / 2.0;
    std::vector<ToneParams> tones;
    tones.reserve(paths.size());
    for (const PathResponse& p : paths) {
        tones.push_back(dechirped_tone(p, tx_offset.f_off_hz, scn_.chirp, band));
    }
    return tones;
}

ChirpResult Simulator::run_chirp(const ChirpOptions& opts) {
    const std::uint64_t idx = chirp_count_++;
    const std::size_t n_adc = scn_.adc_samples_per_chirp();

    const std::vector<ToneParams> tones = ground_truth_tones(opts.tx_offset, idx);
    std::vector<cplx> rx = synthesize_beat_signal(tones, scn_.adc.fs_hz, n_adc);

    const std::vector<cplx> noise =
        make_noise(scn_.noise, scn_.link_budget, scn_.adc.fs_hz, n_adc, scn_.seed, idx);
    for (std::size_t m = 0; m < n_adc; ++m) {
        rx[m] += noise[m];
    }

    std::vector<cplx> rep(n_adc, cplx{0.0, 0.0});
    if (opts.replica != nullptr) {
        rep = replica_envelope(*opts.replica, scn_.dds, scn_.adc.fs_hz, n_adc);
    }

    ChirpResult result;
    result.chirp_index = idx;
    result.rf_residual_dbm = rf_residual_power_dbm(rx, rep, scn_.combiner, ref_power_dbm());

    const std::vector<cplx> combined = combine(rx, rep, scn_.combiner);
    AdcResult adc = adc_sample(combined, scn_.adc);
    result.clipped = adc.clipped;

    std::vector<cplx> dec = decimate(adc.samples, scn_.adc.decimation);
    // Fixed-point datapath: re-quantize after the decimation stage.
    result.decimated = requantize(dec, scn_.adc.bits, scn_.adc.full_scale);

    result.spectrum = range_fft(result.decimated, opts.window, scn_.decimated_rate_hz(),
                                ref_power_dbm(), scn_.adc.bits);
    return result;
}

} // namespace fmcw
