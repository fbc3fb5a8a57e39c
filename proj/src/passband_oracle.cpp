#include "fmcw/passband_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fmcw/errors.hpp"

namespace fmcw {

namespace {

double bessel_i0(double x) {
    // Series converges quickly for the argument range Kaiser windows use.
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k < 64; ++k) {
        term *= (x / (2.0 * k)) * (x / (2.0 * k));
        sum += term;
        if (term < 1e-18 * sum) {
            break;
        }
    }
    return sum;
}

// Windowed-sinc lowpass; cutoff normalized to fs = 1. Kept deliberately distinct
// from the production equiripple designer.
std::vector<double> kaiser_lowpass(double cutoff, double transition, double atten_db) {
    const double beta = atten_db > 50.0 ? 0.1102 * (atten_db - 8.7)
                                        : 0.5842 * std::pow(atten_db - 21.0, 0.4) +
                                              0.07886 * (atten_db - 21.0);
    auto taps = static_cast<std::size_t>(
        std::ceil((atten_db - 8.0) / (2.285 * kTwoPi * transition)));
    if (taps % 2 == 0) {
        ++taps;
    }
    const auto half = static_cast<std::ptrdiff_t>((taps - 1) / 2);
    const double i0_beta = bessel_i0(beta);
    std::vector<double> h(taps);
    for (std::ptrdiff_t j = -half; j <= half; ++j) {
        const double x = static_cast<double>(j);
        const double sinc =
            j == 0 ? 2.0 * cutoff : std::sin(kTwoPi * cutoff * x) / (kPi * x);
        const double r = x / static_cast<double>(half);
        const double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
        h[static_cast<std::size_t>(j + half)] = sinc * w;
    }
    return h;
}

struct StridedBaseband {
    std::vector<cplx> samples;
    std::vector<double> times_s; // absolute signal time of each sample
};

cplx correlate(const StridedBaseband& bb, double freq_hz) {
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < bb.samples.size(); ++m) {
        const double ph = -kTwoPi * freq_hz * bb.times_s[m];
        acc += bb.samples[m] * cplx{std::cos(ph), std::sin(ph)};
    }
    return acc / static_cast<double>(bb.samples.size());
}

} // namespace

OracleMeasurement passband_oracle(const ChirpConfig& cfg_toy, const PathResponse& path,
                                  double f_off_hz, double fs_high_hz) {
    cfg_toy.validate();
    if (fs_high_hz < 10.0 * 2.0 * cfg_toy.f_stop_hz) {
        throw OracleResolutionError("oracle: fs_high must oversample the passband 10x");
    }

    const double k = chirp_slope(cfg_toy);
    const double tau = path.delay_s;
    const auto n = static_cast<std::size_t>(std::llround(cfg_toy.t_chirp_s * fs_high_hz));

    // Real transmitted passband signal, delayed analytically, with the TX offset
    // applied to the transmitted chirp only.
    const double f_tx = cfg_toy.f_start_hz + f_off_hz;
    std::vector<double> rx(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double t = static_cast<double>(m) / fs_high_hz - tau;
        rx[m] = path.gain * cfg_toy.amplitude *
                std::cos(kTwoPi * f_tx * t + kPi * k * t * t + cfg_toy.phi0_rad);
    }

    // Complex downconversion by the conjugate local chirp.
    std::vector<cplx> bb(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double t = static_cast<double>(m) / fs_high_hz;
        const double ph = kTwoPi * cfg_toy.f_start_hz * t + kPi * k * t * t + cfg_toy.phi0_rad;
        bb[m] = rx[m] * cplx{std::cos(ph), -std::sin(ph)};
    }

    // Lowpass keeping only the beat; evaluate the convolution only at a decimated
    // set of output points (the spectrum above the beat is empty after filtering).
    // Cutoff mid-transition: flat to 2.5 kHz, stopping by 200 kHz.
    const double scan_max_hz = 2200.0;
    const std::vector<double> h = kaiser_lowpass((2.5e3 + 200e3) / 2.0 / fs_high_hz,
                                                 (200e3 - 2.5e3) / fs_high_hz, 90.0);
    const std::size_t nf = h.size();
    if (n < 4 * nf) {
        throw OracleResolutionError("oracle: window too short for the analysis filter");
    }
    const std::size_t stride = std::max<std::size_t>(1, n / 2048);
    StridedBaseband strided;
    for (std::size_t j = nf - 1; j < n; j += stride) {
        cplx acc{0.0, 0.0};
        for (std::size_t l = 0; l < nf; ++l) {
            acc += h[l] * bb[j - l];
        }
        strided.samples.push_back(acc);
        strided.times_s.push_back(
            (static_cast<double>(j) - static_cast<double>(nf - 1) / 2.0) / fs_high_hz);
    }

    const double window_s = strided.times_s.back() - strided.times_s.front();
    const double resolution = 1.0 / window_s;

    // Coarse scan of the signed envelope frequency, then golden-section refinement.
    double best_f = 0.0;
    double best_mag = -1.0;
    const double coarse_step = resolution / 4.0;
    for (double f = -scan_max_hz; f <= scan_max_hz; f += coarse_step) {
        const double mag = std::abs(correlate(strided, f));
        if (mag > best_mag) {
            best_mag = mag;
            best_f = f;
        }
    }
    if (best_mag <= 0.0 || std::abs(best_f) > scan_max_hz - 2.0 * coarse_step) {
        throw OracleResolutionError("oracle: dominant tone outside the scanned band");
    }
    double lo = best_f - coarse_step;
    double hi = best_f + coarse_step;
    for (int iter = 0; iter < 80; ++iter) {
        const double m1 = lo + 0.381966 * (hi - lo);
        const double m2 = hi - 0.381966 * (hi - lo);
        if (std::abs(correlate(strided, m1)) < std::abs(correlate(strided, m2))) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    const double f_env = 0.5 * (lo + hi);
    const cplx z = correlate(strided, f_env);

    // Report on the model's axis: beat positive for positive delay. The factor 2
    // undoes the cos * exp mixing loss so the amplitude refers to the RF tone.
    OracleMeasurement meas;
    meas.tone.freq_hz = -f_env;
    meas.tone.amp = 2.0 * std::abs(z);
    meas.tone.phase_rad = wrap_phase(std::arg(z));
    meas.resolution_hz = resolution;
    return meas;
}

OracleReport run_oracle_suite(int n_cases, std::uint64_t seed, bool inject_sign_flip) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) {
        const double u = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
        return lo + (hi - lo) * u;
    };

    OracleReport report;
    const double fs_high = 30e6;
    for (int i = 0; i < n_cases; ++i) {
        OracleCase c;
        c.cfg.f_start_hz = uniform(0.8e6, 1.2e6);
        c.cfg.f_stop_hz = c.cfg.f_start_hz + uniform(50e3, 150e3);
        c.cfg.t_chirp_s = uniform(5e-3, 15e-3);
        c.cfg.amplitude = uniform(0.5, 2.0);
        c.cfg.phi0_rad = uniform(-kPi, kPi);
        c.path.delay_s = uniform(0.2e-6, 25e-6);
        c.path.gain = uniform(0.1, 1.0);
        c.f_off_hz = (i % 3 == 0) ? 0.0 : uniform(-800.0, 800.0);

        const OracleMeasurement meas = passband_oracle(c.cfg, c.path, c.f_off_hz, fs_high);
        const double model_off = inject_sign_flip ? -c.f_off_hz : c.f_off_hz;
        const ToneParams model = dechirped_tone(c.path, model_off, c.cfg);

        const double rbw_toy = 1.0 / c.cfg.t_chirp_s;
        c.freq_err_rel_rbw = std::abs(model.freq_hz - meas.tone.freq_hz) / rbw_toy;
        c.phase_err_rad = std::abs(wrap_phase(model.phase_rad - meas.tone.phase_rad));
        c.amp_rel_err = std::abs(model.amp - meas.tone.amp) / model.amp;

        report.max_freq_err_rel_rbw = std::max(report.max_freq_err_rel_rbw, c.freq_err_rel_rbw);
        report.max_phase_err_rad = std::max(report.max_phase_err_rad, c.phase_err_rad);
        report.max_amp_rel_err = std::max(report.max_amp_rel_err, c.amp_rel_err);
        report.cases.push_back(c);
    }
    report.pass = report.max_freq_err_rel_rbw < OracleReport::kFreqTolRelRbw &&
                  report.max_phase_err_rad < OracleReport::kPhaseTolRad;
    return report;
}

} // namespace fmcw
