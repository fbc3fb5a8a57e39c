#include "fmcw/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fmcw/errors.hpp"
#include "fmcw/fft.hpp"
#include "fmcw/scenario.hpp"

namespace fmcw {

double target_received_power_dbm(const TargetSpec& target, const LinkBudget& lb) {
    const double lambda = kSpeedOfLight / lb.carrier_hz;
    const double sigma = db_to_power(target.rcs_dbsm); // m^2
    const double r4 = std::pow(target.range_m, 4.0);
    const double four_pi_cubed = std::pow(4.0 * kPi, 3.0);
    return lb.tx_power_dbm + lb.tx_ant_gain_dbi + lb.rx_ant_gain_dbi +
           power_to_db(lambda * lambda * sigma / (four_pi_cubed * r4));
}

double leakage_amplitude(const LeakageSpec& leak, const LinkBudget& /*lb*/) {
    return db_to_amplitude(leak.coupling_db);
}

double noise_floor_dbm(double nf_db, double bandwidth_hz) {
    return -174.0 + power_to_db(bandwidth_hz) + nf_db;
}

std::vector<PathResponse> scenario_to_paths(const Scenario& s) {
    std::vector<PathResponse> paths;
    paths.reserve(s.leakage.size() + s.targets.size());

    for (const LeakageSpec& leak : s.leakage) {
        PathResponse p;
        p.delay_s = leak.delay_s;
        p.gain = leakage_amplitude(leak, s.link_budget);
        p.kind = PathKind::leakage;
        paths.push_back(p);
    }
    std::stable_sort(paths.begin(), paths.end(),
                     [](const PathResponse& a, const PathResponse& b) { return a.delay_s < b.delay_s; });

    std::vector<PathResponse> targets;
    targets.reserve(s.targets.size());
    for (const TargetSpec& t : s.targets) {
        PathResponse p;
        p.delay_s = 2.0 * t.range_m / kSpeedOfLight;
        p.gain = db_to_amplitude(target_received_power_dbm(t, s.link_budget) -
                                 s.link_budget.tx_power_dbm);
        p.kind = PathKind::target;
        targets.push_back(p);
    }
    std::stable_sort(targets.begin(), targets.end(),
                     [](const PathResponse& a, const PathResponse& b) { return a.delay_s < b.delay_s; });
    paths.insert(paths.end(), targets.begin(), targets.end());

    for (std::size_t i = 1; i < paths.size(); ++i) {
        if (paths[i].delay_s == paths[i - 1].delay_s && paths[i].kind == paths[i - 1].kind) {
            throw ScenarioError("two paths share the identical delay " +
                                std::to_string(paths[i].delay_s) + " s");
        }
    }
    return paths;
}

std::vector<PathResponse> apply_drift(const std::vector<PathResponse>& paths,
                                      std::uint64_t chirp_index, const DriftConfig& d) {
    if (!d.enabled) {
        return paths;
    }
    const double idx = static_cast<double>(chirp_index);
    std::vector<PathResponse> out = paths;
    for (PathResponse& p : out) {
        if (p.kind != PathKind::leakage) {
            continue;
        }
        p.phase_offset_rad += idx * d.phase_drift_rad_per_chirp;
        p.gain *= db_to_amplitude(idx * d.gain_drift_db_per_chirp);
    }
    return out;
}

namespace {

// Cross-platform deterministic standard normal pairs (plain Box-Muller).
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    cplx next_pair() {
        // u1 in (0,1] so the log is finite; u2 in [0,1).
        const double u1 =
            (static_cast<double>(rng_() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
        const double u2 = static_cast<double>(rng_() >> 11) * (1.0 / 9007199254740992.0);
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
    }

private:
    std::mt19937_64 rng_;
};

} // namespace

std::vector<cplx> make_noise(const NoiseConfig& cfg, const LinkBudget& lb, double fs_hz,
                             std::size_t n, std::uint64_t scenario_seed,
                             std::uint64_t chirp_index) {
    if (!cfg.enabled || n == 0) {
        return std::vector<cplx>(n, cplx{0.0, 0.0});
    }

    // Total complex noise power across the sampled band, in amplitude^2 units
    // where unit amplitude corresponds to tx_power_dbm.
    const double total_dbm = noise_floor_dbm(lb.nf_db, fs_hz);
    const double sigma2 = db_to_power(total_dbm - lb.tx_power_dbm);
    const double per_component = std::sqrt(sigma2 / 2.0);

    GaussianStream gauss(scenario_seed ^ chirp_index);
    std::vector<cplx> noise(n);
    for (std::size_t m = 0; m < n; ++m) {
        noise[m] = per_component * gauss.next_pair();
    }

    if (cfg.flicker_corner_hz > 0.0) {
        // Shape to PSD ∝ (1 + fc/|f|): white floor untouched above the corner,
        // 1/f excess below it. DC treated as the first bin.
        std::vector<cplx> spec = dft_forward(noise);
        const double bin_hz = fs_hz / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double kk = (k <= n / 2) ? static_cast<double>(k)
                                           : static_cast<double>(k) - static_cast<double>(n);
            const double f = std::max(std::abs(kk) * bin_hz, bin_hz);
            spec[k] *= std::sqrt(1.0 + cfg.flicker_corner_hz / f);
        }
        std::vector<cplx> shaped = dft_inverse(spec);
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t m = 0; m < n; ++m) {
            noise[m] = shaped[m] * inv_n;
        }
    }
    return noise;
}

} // namespace fmcw
