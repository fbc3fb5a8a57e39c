#pragma once

#include <span>
#include <vector>

#include "fmcw/common.hpp"

namespace fmcw {

// Unnormalized forward DFT: X[k] = sum_m x[m] * exp(-i*2*pi*k*m/n).
// Arbitrary n (mixed radix). Deterministic run-to-run for a given n.
std::vector<cplx> dft_forward(std::span<const cplx> x);

// Unnormalized inverse DFT: y[m] = sum_k X[k] * exp(+i*2*pi*k*m/n).
// dft_inverse(dft_forward(x)) == n * x.
std::vector<cplx> dft_inverse(std::span<const cplx> x);

} // namespace fmcw
