#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fmcw/common.hpp"
#include "fmcw/signal_model.hpp"

namespace fmcw {

// DDS/DAC tone generator description. The frequency grid comes from a 2^16-state
// phase accumulator clocked at dac_rate (10 MSps -> 152.587890625 Hz steps);
// table_len is the sine lookup table size and dac_bits the amplitude resolution.
// dac_bits == 0 selects an ideal (unquantized) generator.
struct DdsConfig {
    double dac_rate_hz = 10e6;
    std::uint32_t table_len = 16384;
    std::uint32_t dac_bits = 16;

    static constexpr std::uint32_t kAccumulatorBits = 16;

    double freq_step_hz() const {
        return dac_rate_hz / static_cast<double>(std::uint64_t{1} << kAccumulatorBits);
    }
    void validate() const;
};

// A TX IQ-mixer frequency offset pinned to the DDS grid: f_off = step_index * freq_step.
struct TxOffsetSetting {
    std::int64_t step_index = 0;
    double f_off_hz = 0.0;
};

inline TxOffsetSetting make_tx_offset(std::int64_t index, const DdsConfig& dds) {
    return TxOffsetSetting{index, static_cast<double>(index) * dds.freq_step_hz()};
}

// Tone ensemble driving the Replica IQ-mixer. Rendered inverted for cancellation.
struct ReplicaProgram {
    std::vector<ToneParams> tones;
    bool inverted = true;
};

// Equal-split Wilkinson combiner (memoryless, frequency-flat). The optional
// replica-port loss models the 10 dB-coupler alternative; negative means
// "same as the signal port".
struct CombinerModel {
    double insertion_loss_db = 3.01;
    double isolation_db = 30.0;
    double replica_port_loss_db = -1.0;

    double signal_port_gain() const { return db_to_amplitude(-insertion_loss_db); }
    double replica_port_gain() const {
        return db_to_amplitude(-(replica_port_loss_db >= 0.0 ? replica_port_loss_db
                                                             : insertion_loss_db));
    }
    void validate() const;
};

// Snap a desired offset to the nearest DDS grid point; ties round toward zero.
TxOffsetSetting quantize_frequency(double f_desired_hz, const DdsConfig& dds);

// Render the replica ensemble as a complex envelope relative to the local chirp.
// Each tone's instantaneous phase is quantized to the DDS table grid and the summed
// samples to dac_bits (full scale 1.0); both steps are skipped when dac_bits == 0.
// The result is negated when prog.inverted.
std::vector<cplx> replica_envelope(const ReplicaProgram& prog, const DdsConfig& dds,
                                   double fs_hz, std::size_t n);

// Wilkinson combination of the two input ports: each attenuated by its port loss,
// then summed. Throws LengthMismatch.
std::vector<cplx> combine(std::span<const cplx> rx_env, std::span<const cplx> replica_env,
                          const CombinerModel& c);

// Mean power of the combiner output in dBm (ref_power_dbm maps unit amplitude to dBm).
// Exact cancellation yields -infinity; report as "below -200 dBm".
double rf_residual_power_dbm(std::span<const cplx> rx_env, std::span<const cplx> replica_env,
                             const CombinerModel& c, double ref_power_dbm);

} // namespace fmcw
