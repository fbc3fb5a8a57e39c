#include "fmcw/fir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fmcw/common.hpp"

// Parks-McClellan exchange on a dense frequency grid. The interpolation nodes are
// handled in the x = cos(omega) domain with barycentric weights computed through
// log-magnitudes, which keeps the products finite for a couple hundred nodes.

namespace fmcw {

namespace {

struct GridPoint {
    double x;       // cos(omega)
    double desired; // 1 in passband, 0 in stopband
    double weight;
};

struct DesignGrid {
    std::vector<GridPoint> points;
    std::size_t pass_count = 0; // indices [0, pass_count) are the passband
};

// Herrmann-Rabiner length estimate for a lowpass with the given ripples.
std::size_t estimate_order(const FirSpec& s) {
    const double l1 = std::log10(s.delta_pass);
    const double l2 = std::log10(s.delta_stop);
    const double d = (0.005309 * l1 * l1 + 0.07114 * l1 - 0.4761) * l2 -
                     (0.00266 * l1 * l1 + 0.5941 * l1 + 0.4278);
    const double f = 11.01217 + 0.51244 * (l1 - l2);
    const double df = s.stop_edge - s.pass_edge;
    const double n = d / df - f * df + 1.0;
    auto taps = static_cast<std::size_t>(std::ceil(n));
    if (taps % 2 == 0) {
        ++taps;
    }
    return std::max<std::size_t>(taps, 11);
}

// Barycentric weights for the given nodes, scaled so the largest is 1.
std::vector<double> barycentric_weights(const std::vector<double>& x) {
    const std::size_t r = x.size();
    std::vector<double> logw(r, 0.0);
    std::vector<double> sign(r, 1.0);
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t j = 0; j < r; ++j) {
            if (j == k) {
                continue;
            }
            const double d = x[k] - x[j];
            logw[k] -= std::log(std::abs(d));
            if (d < 0.0) {
                sign[k] = -sign[k];
            }
        }
    }
    const double top = *std::max_element(logw.begin(), logw.end());
    std::vector<double> w(r);
    for (std::size_t k = 0; k < r; ++k) {
        w[k] = sign[k] * std::exp(logw[k] - top);
    }
    return w;
}

struct Exchange {
    std::vector<double> node_x;
    std::vector<double> node_y; // interpolated values at nodes
    std::vector<double> bary_w; // weights over node_x
    double delta = 0.0;

    double evaluate(double x) const {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t k = 0; k < node_x.size(); ++k) {
            const double d = x - node_x[k];
            if (std::abs(d) < 1e-14) {
                return node_y[k];
            }
            const double t = bary_w[k] / d;
            num += t * node_y[k];
            den += t;
        }
        return num / den;
    }
};

// Solve for delta and the interpolant through the current extremal set.
Exchange solve_on_extremals(const std::vector<GridPoint>& grid,
                            const std::vector<std::size_t>& ext) {
    const std::size_t r = ext.size();
    std::vector<double> x(r);
    std::vector<double> des(r);
    std::vector<double> wt(r);
    for (std::size_t k = 0; k < r; ++k) {
        x[k] = grid[ext[k]].x;
        des[k] = grid[ext[k]].desired;
        wt[k] = grid[ext[k]].weight;
    }
    const std::vector<double> gamma = barycentric_weights(x);

    double num = 0.0;
    double den = 0.0;
    double sgn = 1.0;
    for (std::size_t k = 0; k < r; ++k) {
        num += gamma[k] * des[k];
        den += sgn * gamma[k] / wt[k];
        sgn = -sgn;
    }
    const double delta = num / den;

    Exchange ex;
    ex.delta = delta;
    // Interpolate through the first r-1 nodes; the r-th is matched implicitly.
    ex.node_x.assign(x.begin(), x.end() - 1);
    ex.node_y.resize(r - 1);
    sgn = 1.0;
    for (std::size_t k = 0; k + 1 < r; ++k) {
        ex.node_y[k] = des[k] - sgn * delta / wt[k];
        sgn = -sgn;
    }
    ex.bary_w = barycentric_weights(ex.node_x);
    return ex;
}

// Pick the next extremal set: local maxima of |E| (band edges always candidates)
// with enforced sign alternation.
std::vector<std::size_t> pick_extremals(const std::vector<double>& err, std::size_t pass_count,
                                        std::size_t want) {
    const std::size_t g = err.size();
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < g; ++i) {
        const double e = std::abs(err[i]);
        const bool forced =
            i == 0 || i + 1 == g || i == pass_count - 1 || i == pass_count;
        const bool left_ok = (i == 0) || e >= std::abs(err[i - 1]);
        const bool right_ok = (i + 1 == g) || e > std::abs(err[i + 1]);
        if ((forced || (left_ok && right_ok)) && e > 0.0) {
            cand.push_back(i);
        }
    }
    // Merge same-sign neighbors, keeping the larger error.
    std::vector<std::size_t> alt;
    for (std::size_t idx : cand) {
        if (!alt.empty() && (err[alt.back()] > 0.0) == (err[idx] > 0.0)) {
            if (std::abs(err[idx]) > std::abs(err[alt.back()])) {
                alt.back() = idx;
            }
        } else {
            alt.push_back(idx);
        }
    }
    // Trim to the wanted count from the ends (drop the smaller outer extremum first).
    while (alt.size() > want) {
        if (std::abs(err[alt.front()]) < std::abs(err[alt.back()])) {
            alt.erase(alt.begin());
        } else {
            alt.pop_back();
        }
    }
    return alt;
}

std::vector<double> attempt_design(const FirSpec& spec, std::size_t taps, std::size_t density,
                                   double* out_delta) {
    const std::size_t half = (taps - 1) / 2; // cosine basis order M
    const std::size_t r = half + 2;          // extremal count

    // Dense grid, both bands, edges included.
    const double wp = spec.pass_edge * kTwoPi;
    const double ws = spec.stop_edge * kTwoPi;
    const double band1 = wp;
    const double band2 = kPi - ws;
    const std::size_t total = r * density;
    auto pts1 = static_cast<std::size_t>(
        std::max(8.0, std::round(static_cast<double>(total) * band1 / (band1 + band2))));
    const std::size_t pts2 = std::max<std::size_t>(8, total - pts1);

    std::vector<GridPoint> grid;
    grid.reserve(pts1 + pts2);
    const double weight_pass = 1.0 / spec.delta_pass;
    const double weight_stop = 1.0 / spec.delta_stop;
    for (std::size_t i = 0; i < pts1; ++i) {
        const double w = band1 * static_cast<double>(i) / static_cast<double>(pts1 - 1);
        grid.push_back({std::cos(w), 1.0, weight_pass});
    }
    for (std::size_t i = 0; i < pts2; ++i) {
        const double w = ws + band2 * static_cast<double>(i) / static_cast<double>(pts2 - 1);
        grid.push_back({std::cos(w), 0.0, weight_stop});
    }

    // Initial extremals: split between the bands in proportion to their widths,
    // uniformly within each band, band edges always included.
    std::size_t n_pass = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::round(static_cast<double>(r) * band1 / (band1 + band2))),
        2, r - 2);
    const std::size_t n_stop = r - n_pass;
    std::vector<std::size_t> ext;
    ext.reserve(r);
    for (std::size_t k = 0; k < n_pass; ++k) {
        ext.push_back(k * (pts1 - 1) / (n_pass - 1));
    }
    for (std::size_t k = 0; k < n_stop; ++k) {
        ext.push_back(pts1 + k * (pts2 - 1) / (n_stop - 1));
    }

    Exchange ex;
    double prev_delta = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 60; ++iter) {
        ex = solve_on_extremals(grid, ext);
        std::vector<double> err(grid.size());
        double max_err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            err[i] = grid[i].weight * (ex.evaluate(grid[i].x) - grid[i].desired);
            max_err = std::max(max_err, std::abs(err[i]));
        }
        const double delta = std::abs(ex.delta);
        if (delta > 0.0 && (max_err - delta) / delta < 1e-5) {
            converged = true;
            break;
        }
        if (iter > 0 && std::abs(delta - prev_delta) < 1e-12 * delta) {
            converged = true; // reference set stabilized within grid resolution
            break;
        }
        prev_delta = delta;
        std::vector<std::size_t> next = pick_extremals(err, pts1, r);
        if (next.size() < r) {
            break; // degenerate; caller will retry with more taps
        }
        ext = std::move(next);
    }
    if (!converged) {
        return {};
    }
    *out_delta = std::abs(ex.delta);

    // Sample the response at L = 2M+1 points and invert the cosine series.
    const std::size_t len = 2 * half + 1;
    std::vector<double> samples(half + 1);
    for (std::size_t m = 0; m <= half; ++m) {
        const double w = kTwoPi * static_cast<double>(m) / static_cast<double>(len);
        samples[m] = ex.evaluate(std::cos(w));
    }
    std::vector<double> h(taps, 0.0);
    for (std::size_t j = 0; j <= half; ++j) {
        double acc = samples[0];
        for (std::size_t m = 1; m <= half; ++m) {
            acc += 2.0 * samples[m] *
                   std::cos(kTwoPi * static_cast<double>(m) * static_cast<double>(j) /
                            static_cast<double>(len));
        }
        acc /= static_cast<double>(len);
        h[half + j] = acc;
        h[half - j] = acc;
    }
    return h;
}

} // namespace

std::vector<double> design_equiripple_lowpass(const FirSpec& spec) {
    if (!(spec.pass_edge > 0.0) || !(spec.stop_edge > spec.pass_edge) ||
        !(spec.stop_edge < 0.5)) {
        throw std::runtime_error("fir: invalid band edges");
    }
    std::size_t taps = estimate_order(spec);
    for (int attempt = 0; attempt < 12; ++attempt) {
        // A lost-extremal exchange is usually a grid resolution artifact; retry
        // denser before spending more taps.
        for (std::size_t density = 64; density <= 256; density *= 2) {
            double delta = 0.0;
            std::vector<double> h = attempt_design(spec, taps, density, &delta);
            // The weighting makes delta the ripple in units of the requested
            // deltas; delta <= 1 means both bands meet spec.
            if (!h.empty() && delta <= 1.0) {
                return h;
            }
            if (!h.empty()) {
                break; // converged but over-rippled: more taps, not more grid
            }
        }
        taps += 8;
    }
    throw std::runtime_error("fir: equiripple design failed to meet the requested ripple");
}

double fir_amplitude_response(const std::vector<double>& taps, double f) {
    const std::size_t half = (taps.size() - 1) / 2;
    const double w = kTwoPi * f;
    double acc = taps[half];
    for (std::size_t j = 1; j <= half; ++j) {
        acc += 2.0 * taps[half + j] * std::cos(w * static_cast<double>(j));
    }
    return acc;
}

} // namespace fmcw
