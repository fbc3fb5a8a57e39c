#include "fmcw/signal_model.hpp"

#include <cmath>
#include <string>

namespace fmcw {

void ChirpConfig::validate() const {
    if (!(f_stop_hz > f_start_hz)) {
        throw ScenarioError("chirp: f_stop must exceed f_start (up-chirp only)");
    }
    if (!(t_chirp_s > 0.0)) {
        throw ScenarioError("chirp: t_chirp must be positive");
    }
    if (!(amplitude > 0.0)) {
        throw ScenarioError("chirp: amplitude must be positive");
    }
    const double k = bandwidth_hz() / t_chirp_s;
    if (!std::isfinite(k) || !(k > 0.0)) {
        throw ScenarioError("chirp: slope B/T is not finite and positive");
    }
}

double chirp_slope(const ChirpConfig& cfg) {
    return cfg.bandwidth_hz() / cfg.t_chirp_s;
}

double beat_frequency(double range_m, const ChirpConfig& cfg) {
    return 2.0 * range_m * cfg.bandwidth_hz() / (kSpeedOfLight * cfg.t_chirp_s);
}

ToneParams dechirped_tone(const PathResponse& path, double f_off_hz, const ChirpConfig& cfg,
                          double rx_bandwidth_hz) {
    const double k = chirp_slope(cfg);
    const double tau = path.delay_s;

    ToneParams tone;
    tone.freq_hz = k * tau - f_off_hz;
    tone.amp = path.gain * cfg.amplitude;
    tone.phase_rad = wrap_phase(-kTwoPi * (cfg.f_start_hz + f_off_hz) * tau +
                                kPi * k * tau * tau + path.phase_offset_rad);

    if (std::abs(tone.freq_hz) >= rx_bandwidth_hz) {
        throw ToneOutOfBand("de-chirped tone at " + std::to_string(tone.freq_hz) +
                            " Hz falls outside the receive band of " +
                            std::to_string(rx_bandwidth_hz) + " Hz");
    }
    return tone;
}

std::vector<cplx> synthesize_beat_signal(std::span<const ToneParams> tones, double fs_hz,
                                         std::size_t n) {
    for (const ToneParams& t : tones) {
        if (std::abs(t.freq_hz) >= fs_hz / 2.0) {
            throw AliasError("tone at " + std::to_string(t.freq_hz) +
                             " Hz aliases at sample rate " + std::to_string(fs_hz));
        }
    }
    std::vector<cplx> x(n, cplx{0.0, 0.0});
    for (const ToneParams& t : tones) {
        const double w = kTwoPi * t.freq_hz / fs_hz;
        for (std::size_t m = 0; m < n; ++m) {
            const double ph = w * static_cast<double>(m) + t.phase_rad;
            x[m] += t.amp * cplx{std::cos(ph), std::sin(ph)};
        }
    }
    return x;
}

} // namespace fmcw
