#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fmcw/common.hpp"

namespace fmcw {

struct AdcConfig {
    double fs_hz = 100e6;
    std::uint32_t bits = 16;
    double full_scale = 1.0; // linear amplitude, per quadrature component
    std::uint32_t decimation = 10;

    void validate() const;
};

struct AdcResult {
    std::vector<cplx> samples;
    bool clipped = false;
};

enum class Window { rectangular, hann };

// Complex range spectrum. Bins are DFT/n (coherent-gain compensated for Hann), so an
// exactly coherent tone of amplitude a reads |bin| = a; ref_power_dbm maps unit
// amplitude to absolute power.
struct Spectrum {
    std::vector<cplx> bins;
    double rbw_hz = 0.0;
    std::size_t n = 0;
    Window window = Window::rectangular;
    double ref_power_dbm = 0.0;
};

// Quantize a sample block to a bit grid (mid-tread, clamped to the code range).
// Shared by the ADC and the fixed-point stages of the processing chain.
std::vector<cplx> requantize(std::span<const cplx> x, std::uint32_t bits, double full_scale);

// Mid-tread I/Q quantization at full_scale; clip flag set when any |I| or |Q|
// strictly exceeds full scale (exactly full scale is the top code, not a clip).
AdcResult adc_sample(std::span<const cplx> env, const AdcConfig& adc);

// Anti-alias equiripple lowpass (passband 0.4*fs/factor, stopband 0.5*fs/factor,
// >= 60 dB) then keep every factor-th sample. The de-chirped stream is
// chirp-periodic in steady state, so the filter is applied circularly with a
// zero-phase centered kernel: group delay is compensated exactly and the
// coherent-sampling property of aligned tones is preserved. Throws LengthError
// when factor does not divide the length or the block is shorter than the filter.
std::vector<cplx> decimate(std::span<const cplx> x, std::size_t factor);

// Amplitude response of the decimation filter at freq_hz (fs_hz = input rate);
// the known chain constant used when referring bin readings back to RF.
double decimation_gain(double freq_hz, double fs_hz, std::size_t factor);

// Windowed DFT of one chirp, normalized so coherent tone amplitudes are preserved.
// fixed_point_bits > 0 re-quantizes the windowed samples before the transform
// (the fixed-point hardware datapath); the DFT itself runs in double precision.
Spectrum range_fft(std::span<const cplx> x, Window window, double fs_hz,
                   double ref_power_dbm, std::uint32_t fixed_point_bits = 0);

// (magnitude dBm, phase rad) of one bin. Throws std::out_of_range.
std::pair<double, double> bin_reading(const Spectrum& s, std::size_t k);

// Adjacent-bin energy normalized to the center bin: (|b[k-1]|^2 + |b[k+1]|^2) / |b[k]|^2.
// Returns +infinity when the center bin is exactly zero. Requires 1 <= k < n-1.
double spectral_leakage_metric(const Spectrum& s, std::size_t k);

// Single-frequency DTFT with the same 1/n normalization as the spectrum:
// X(f) = (1/n) sum_m x[m] exp(-i*2*pi*f*m/fs).
cplx dtft_point(std::span<const cplx> x, double fs_hz, double freq_hz);

} // namespace fmcw
