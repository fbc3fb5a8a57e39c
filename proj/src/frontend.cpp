#include "fmcw/frontend.hpp"

#include <cmath>
#include <string>

#include "fmcw/errors.hpp"

namespace fmcw {

void DdsConfig::validate() const {
    if (!(dac_rate_hz > 0.0)) {
        throw ScenarioError("dds: dac_rate must be positive");
    }
    if (table_len == 0 || (table_len & (table_len - 1)) != 0) {
        throw ScenarioError("dds: table_len must be a power of two");
    }
    if (dac_bits > 24) {
        throw ScenarioError("dds: dac_bits out of range [0, 24]");
    }
    if (!(freq_step_hz() > 0.0)) {
        throw ScenarioError("dds: frequency step must be positive");
    }
}

void CombinerModel::validate() const {
    if (replica_port_loss_db < 0.0 && insertion_loss_db < 3.0) {
        throw ScenarioError("combiner: equal-split insertion loss below 3.0 dB");
    }
    if (!(isolation_db > 0.0)) {
        throw ScenarioError("combiner: isolation must be positive");
    }
}

TxOffsetSetting quantize_frequency(double f_desired_hz, const DdsConfig& dds) {
    const double step = dds.freq_step_hz();
    const double ratio = f_desired_hz / step;
    // Nearest grid point, ties toward zero.
    double idx = std::floor(ratio + 0.5);
    if (idx - ratio == 0.5 && idx > 0.0) {
        idx -= 1.0;
    }
    const auto n = static_cast<std::int64_t>(idx);
    return make_tx_offset(n, dds);
}

namespace {

double quantize_midtread(double x, double step, double max_code) {
    double code = std::floor(x / step + 0.5);
    if (code > max_code) {
        code = max_code;
    } else if (code < -max_code) {
        code = -max_code;
    }
    return code * step;
}

} // namespace

std::vector<cplx> replica_envelope(const ReplicaProgram& prog, const DdsConfig& dds,
                                   double fs_hz, std::size_t n) {
    if (prog.tones.empty()) {
        return std::vector<cplx>(n, cplx{0.0, 0.0});
    }

    for (const ToneParams& t : prog.tones) {
        if (std::abs(t.freq_hz) >= fs_hz / 2.0) {
            throw AliasError("replica tone at " + std::to_string(t.freq_hz) +
                             " Hz aliases at sample rate " + std::to_string(fs_hz));
        }
    }

    const bool ideal = dds.dac_bits == 0;
    std::vector<cplx> out;
    if (ideal) {
        // Identical rendering path as the receive side, so a matching inverted
        // program cancels sample-for-sample.
        out = synthesize_beat_signal(prog.tones, fs_hz, n);
    } else {
        out.assign(n, cplx{0.0, 0.0});
        const double table_len = static_cast<double>(dds.table_len);
        for (const ToneParams& t : prog.tones) {
            const double cycles_per_sample = t.freq_hz / fs_hz;
            const double phase0_cycles = t.phase_rad / kTwoPi;
            for (std::size_t m = 0; m < n; ++m) {
                // Phase granularity of the sine table.
                const double cycles =
                    std::floor((cycles_per_sample * static_cast<double>(m) + phase0_cycles) *
                                   table_len +
                               0.5) /
                    table_len;
                const double ph = kTwoPi * cycles;
                out[m] += t.amp * cplx{std::cos(ph), std::sin(ph)};
            }
        }
    }

    if (!ideal) {
        const double step = 1.0 / static_cast<double>(std::uint64_t{1} << (dds.dac_bits - 1));
        const double max_code =
            static_cast<double>((std::uint64_t{1} << (dds.dac_bits - 1)) - 1);
        for (cplx& v : out) {
            v = cplx{quantize_midtread(v.real(), step, max_code),
                     quantize_midtread(v.imag(), step, max_code)};
        }
    }

    if (prog.inverted) {
        for (cplx& v : out) {
            v = -v;
        }
    }
    return out;
}

std::vector<cplx> combine(std::span<const cplx> rx_env, std::span<const cplx> replica_env,
                          const CombinerModel& c) {
    if (rx_env.size() != replica_env.size()) {
        throw LengthMismatch("combine: rx has " + std::to_string(rx_env.size()) +
                             " samples, replica has " + std::to_string(replica_env.size()));
    }
    const double gs = c.signal_port_gain();
    const double gr = c.replica_port_gain();
    std::vector<cplx> out(rx_env.size());
    for (std::size_t m = 0; m < out.size(); ++m) {
        out[m] = rx_env[m] * gs + replica_env[m] * gr;
    }
    return out;
}

double rf_residual_power_dbm(std::span<const cplx> rx_env, std::span<const cplx> replica_env,
                             const CombinerModel& c, double ref_power_dbm) {
    const std::vector<cplx> out = combine(rx_env, replica_env, c);
    double acc = 0.0;
    for (const cplx& v : out) {
        acc += std::norm(v);
    }
    const double mean_power = out.empty() ? 0.0 : acc / static_cast<double>(out.size());
    if (mean_power <= 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return ref_power_dbm + power_to_db(mean_power);
}

} // namespace fmcw
