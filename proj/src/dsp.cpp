#include "fmcw/dsp.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "fmcw/errors.hpp"
#include "fmcw/fft.hpp"
#include "fmcw/fir.hpp"

namespace fmcw {

void AdcConfig::validate() const {
    if (!(fs_hz > 0.0)) {
        throw ScenarioError("adc: sample rate must be positive");
    }
    if (bits < 8 || bits > 24) {
        throw ScenarioError("adc: bits must lie in [8, 24]");
    }
    if (!(full_scale > 0.0)) {
        throw ScenarioError("adc: full_scale must be positive");
    }
    if (decimation < 1) {
        throw ScenarioError("adc: decimation factor must be >= 1");
    }
}

namespace {

double quantize_component(double x, double step, double max_code) {
    double code = std::floor(x / step + 0.5);
    if (code > max_code) {
        code = max_code;
    } else if (code < -max_code) {
        code = -max_code;
    }
    return code * step;
}

struct QuantGrid {
    double step;
    double max_code;
};

QuantGrid grid_for(std::uint32_t bits, double full_scale) {
    const double step = full_scale / static_cast<double>(std::uint64_t{1} << (bits - 1));
    const double max_code = static_cast<double>((std::uint64_t{1} << (bits - 1)) - 1);
    return {step, max_code};
}

} // namespace

std::vector<cplx> requantize(std::span<const cplx> x, std::uint32_t bits, double full_scale) {
    const QuantGrid g = grid_for(bits, full_scale);
    std::vector<cplx> out(x.size());
    for (std::size_t m = 0; m < x.size(); ++m) {
        out[m] = cplx{quantize_component(x[m].real(), g.step, g.max_code),
                      quantize_component(x[m].imag(), g.step, g.max_code)};
    }
    return out;
}

AdcResult adc_sample(std::span<const cplx> env, const AdcConfig& adc) {
    AdcResult r;
    r.samples = requantize(env, adc.bits, adc.full_scale);
    for (const cplx& v : env) {
        if (std::abs(v.real()) > adc.full_scale || std::abs(v.imag()) > adc.full_scale) {
            r.clipped = true;
            break;
        }
    }
    return r;
}

namespace {

const std::vector<double>& decimation_taps(std::size_t factor) {
    static std::mutex mutex;
    static std::map<std::size_t, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(factor);
    if (it == cache.end()) {
        FirSpec spec;
        spec.pass_edge = 0.4 / static_cast<double>(factor);
        spec.stop_edge = 0.5 / static_cast<double>(factor);
        spec.delta_pass = 5e-5;
        spec.delta_stop = 5e-4;
        it = cache.emplace(factor, design_equiripple_lowpass(spec)).first;
    }
    return it->second;
}

// DFT of the zero-phase centered kernel: real-valued by construction.
const std::vector<double>& kernel_response(std::size_t factor, std::size_t n) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(factor, n);
    auto it = cache.find(key);
    if (it == cache.end()) {
        const std::vector<double>& taps = decimation_taps(factor);
        const std::size_t half = (taps.size() - 1) / 2;
        std::vector<double> resp(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double w = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
            double acc = taps[half];
            for (std::size_t j = 1; j <= half; ++j) {
                acc += 2.0 * taps[half + j] * std::cos(w * static_cast<double>(j));
            }
            resp[k] = acc;
        }
        it = cache.emplace(std::move(key), std::move(resp)).first;
    }
    return it->second;
}

} // namespace

std::vector<cplx> decimate(std::span<const cplx> x, std::size_t factor) {
    if (factor == 0 || x.size() % factor != 0) {
        throw LengthError("decimate: factor " + std::to_string(factor) +
                          " does not divide length " + std::to_string(x.size()));
    }
    if (factor == 1) {
        return {x.begin(), x.end()};
    }
    const std::vector<double>& taps = decimation_taps(factor);
    if (x.size() < taps.size()) {
        throw LengthError("decimate: block of " + std::to_string(x.size()) +
                          " samples is shorter than the " + std::to_string(taps.size()) +
                          "-tap anti-alias filter");
    }
    const std::size_t n = x.size();
    const std::vector<double>& h = kernel_response(factor, n);

    std::vector<cplx> spec = dft_forward(x);
    for (std::size_t k = 0; k < n; ++k) {
        spec[k] *= h[k];
    }
    std::vector<cplx> filtered = dft_inverse(spec);

    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<cplx> out(n / factor);
    for (std::size_t m = 0; m < out.size(); ++m) {
        out[m] = filtered[m * factor] * inv_n;
    }
    return out;
}

double decimation_gain(double freq_hz, double fs_hz, std::size_t factor) {
    if (factor <= 1) {
        return 1.0;
    }
    return fir_amplitude_response(decimation_taps(factor), freq_hz / fs_hz);
}

Spectrum range_fft(std::span<const cplx> x, Window window, double fs_hz,
                   double ref_power_dbm, std::uint32_t fixed_point_bits) {
    const std::size_t n = x.size();
    std::vector<cplx> work(x.begin(), x.end());

    double coherent_gain = 1.0;
    if (window == Window::hann) {
        double wsum = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const double w =
                0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(m) / static_cast<double>(n)));
            work[m] *= w;
            wsum += w;
        }
        coherent_gain = wsum / static_cast<double>(n);
    }
    if (fixed_point_bits > 0) {
        work = requantize(work, fixed_point_bits, 1.0);
    }

    Spectrum s;
    s.bins = dft_forward(work);
    const double scale = 1.0 / (static_cast<double>(n) * coherent_gain);
    for (cplx& b : s.bins) {
        b *= scale;
    }
    s.rbw_hz = fs_hz / static_cast<double>(n);
    s.n = n;
    s.window = window;
    s.ref_power_dbm = ref_power_dbm;
    return s;
}

std::pair<double, double> bin_reading(const Spectrum& s, std::size_t k) {
    if (k >= s.n) {
        throw std::out_of_range("bin_reading: bin " + std::to_string(k) + " of " +
                                std::to_string(s.n));
    }
    const double mag = std::abs(s.bins[k]);
    const double mag_dbm = mag > 0.0 ? s.ref_power_dbm + amplitude_to_db(mag)
                                     : -std::numeric_limits<double>::infinity();
    return {mag_dbm, std::arg(s.bins[k])};
}

double spectral_leakage_metric(const Spectrum& s, std::size_t k) {
    if (k < 1 || k + 1 >= s.n) {
        throw std::out_of_range("spectral_leakage_metric: bin " + std::to_string(k) +
                                " needs both neighbors within 0.." + std::to_string(s.n - 1));
    }
    const double center = std::norm(s.bins[k]);
    const double adjacent = std::norm(s.bins[k - 1]) + std::norm(s.bins[k + 1]);
    if (center == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return adjacent / center;
}

cplx dtft_point(std::span<const cplx> x, double fs_hz, double freq_hz) {
    const double w = -kTwoPi * freq_hz / fs_hz;
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < x.size(); ++m) {
        const double ph = w * static_cast<double>(m);
        acc += x[m] * cplx{std::cos(ph), std::sin(ph)};
    }
    return acc / static_cast<double>(x.size());
}

} // namespace fmcw
