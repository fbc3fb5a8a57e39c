#include "fmcw/scenario.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fmcw/errors.hpp"

namespace fmcw {

std::size_t Scenario::adc_samples_per_chirp() const {
    return static_cast<std::size_t>(std::llround(chirp.t_chirp_s * adc.fs_hz));
}

std::size_t Scenario::fft_length() const { return adc_samples_per_chirp() / adc.decimation; }

double Scenario::rbw_hz() const {
    return decimated_rate_hz() / static_cast<double>(fft_length());
}

void Scenario::validate() const {
    chirp.validate();
    adc.validate();
    dds.validate();
    combiner.validate();

    if (link_budget.nf_db < 0.0) {
        throw ScenarioError("link_budget: noise figure must be >= 0 dB");
    }
    if (link_budget.carrier_hz < chirp.f_start_hz || link_budget.carrier_hz > chirp.f_stop_hz) {
        throw ScenarioError("link_budget: carrier must lie within the chirp sweep");
    }
    for (const LeakageSpec& l : leakage) {
        if (l.delay_s < 0.0) {
            throw ScenarioError("leakage: delay must be >= 0");
        }
        if (!(l.coupling_db < 0.0)) {
            throw ScenarioError("leakage: coupling must be negative dB");
        }
    }
    for (const TargetSpec& t : targets) {
        if (!(t.range_m > 0.0)) {
            throw ScenarioError("target: range must be positive");
        }
    }
    if (!std::isfinite(drift.phase_drift_rad_per_chirp) ||
        !std::isfinite(drift.gain_drift_db_per_chirp)) {
        throw ScenarioError("drift: magnitudes must be finite");
    }

    const double n_exact = chirp.t_chirp_s * adc.fs_hz;
    const auto n = static_cast<double>(adc_samples_per_chirp());
    if (std::abs(n_exact - n) > 1e-6 || n < 2.0) {
        throw ScenarioError("adc: t_chirp * fs must be an integer sample count");
    }
    if (adc_samples_per_chirp() % adc.decimation != 0) {
        throw ScenarioError("adc: decimation must divide the per-chirp sample count");
    }

    // Beats must stay inside the decimated receive band.
    const double k = chirp_slope(chirp);
    const double band = decimated_rate_hz() / 2.0;
    for (const LeakageSpec& l : leakage) {
        if (k * l.delay_s >= band) {
            throw ScenarioError("leakage: beat frequency exceeds the receive band");
        }
    }
    for (const TargetSpec& t : targets) {
        if (beat_frequency(t.range_m, chirp) >= band) {
            throw ScenarioError("target: beat frequency exceeds the receive band");
        }
    }
}

namespace {

struct Line {
    std::size_t number;
    std::string section;
    std::string key;
    std::string value;
};

[[noreturn]] void fail(std::string_view src, std::size_t line, const std::string& msg) {
    throw ScenarioError(std::string(src) + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(std::string_view src, const Line& ln) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(ln.value.c_str(), &end);
    if (end == ln.value.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        fail(src, ln.number, "key '" + ln.key + "' needs a finite number, got '" + ln.value + "'");
    }
    return v;
}

std::uint64_t parse_u64(std::string_view src, const Line& ln) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(ln.value.c_str(), &end, 10);
    if (end == ln.value.c_str() || *end != '\0' || errno == ERANGE) {
        fail(src, ln.number, "key '" + ln.key + "' needs a non-negative integer, got '" +
                                 ln.value + "'");
    }
    return v;
}

std::uint32_t parse_u32(std::string_view src, const Line& ln) {
    const std::uint64_t v = parse_u64(src, ln);
    if (v > 0xffffffffULL) {
        fail(src, ln.number, "key '" + ln.key + "' out of range");
    }
    return static_cast<std::uint32_t>(v);
}

bool parse_bool(std::string_view src, const Line& ln) {
    if (ln.value == "true") {
        return true;
    }
    if (ln.value == "false") {
        return false;
    }
    fail(src, ln.number, "key '" + ln.key + "' needs true or false, got '" + ln.value + "'");
}

std::string trim(std::string_view sv) {
    const auto b = sv.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = sv.find_last_not_of(" \t\r");
    return std::string(sv.substr(b, e - b + 1));
}

} // namespace

Scenario parse_scenario(std::string_view text, std::string_view source_name) {
    Scenario s;
    // Defaults: empty paths, noise on, drift off; everything else per struct defaults.
    s.leakage.clear();
    s.targets.clear();

    static const std::map<std::string, std::set<std::string>> schema = {
        {"chirp", {"f_start_hz", "f_stop_hz", "t_chirp_s", "amplitude", "phi0_rad"}},
        {"link_budget", {"tx_power_dbm", "tx_gain_dbi", "rx_gain_dbi", "nf_db", "carrier_hz"}},
        {"leakage", {"delay_s", "coupling_db"}},
        {"target", {"range_m", "rcs_dbsm"}},
        {"adc", {"fs", "bits", "decimation"}},
        {"dds", {"dac_rate", "table_len", "dac_bits"}},
        {"combiner", {"insertion_loss_db", "replica_port_loss_db", "isolation_db"}},
        {"noise", {"enabled", "flicker_corner_hz"}},
        {"drift", {"enabled", "phase_drift_rad_per_chirp", "gain_drift_db_per_chirp"}},
        {"", {"seed"}},
    };

    std::string section;
    std::set<std::string> seen_keys; // per section instance, for duplicate detection
    std::size_t line_no = 0;
    std::istringstream stream{std::string(text)};
    std::string raw;

    while (std::getline(stream, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }

        if (line.front() == '[') {
            if (line.back() != ']') {
                fail(source_name, line_no, "malformed section header '" + line + "'");
            }
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!schema.contains(section)) {
                fail(source_name, line_no, "unknown section [" + section + "]");
            }
            seen_keys.clear();
            if (section == "leakage") {
                s.leakage.emplace_back();
            } else if (section == "target") {
                s.targets.emplace_back();
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(source_name, line_no, "expected 'key = value', got '" + line + "'");
        }
        Line ln{line_no, section, trim(std::string_view(line).substr(0, eq)),
                trim(std::string_view(line).substr(eq + 1))};
        if (ln.key.empty() || ln.value.empty()) {
            fail(source_name, line_no, "expected 'key = value', got '" + line + "'");
        }
        const auto& allowed = schema.at(section);
        if (!allowed.contains(ln.key)) {
            fail(source_name, line_no,
                 "unknown key '" + ln.key + "' in section [" + section + "]");
        }
        if (!seen_keys.insert(ln.key).second) {
            fail(source_name, line_no,
                 "duplicate key '" + ln.key + "' in section [" + section + "]");
        }

        if (section == "chirp") {
            if (ln.key == "f_start_hz") s.chirp.f_start_hz = parse_double(source_name, ln);
            else if (ln.key == "f_stop_hz") s.chirp.f_stop_hz = parse_double(source_name, ln);
            else if (ln.key == "t_chirp_s") s.chirp.t_chirp_s = parse_double(source_name, ln);
            else if (ln.key == "amplitude") s.chirp.amplitude = parse_double(source_name, ln);
            else s.chirp.phi0_rad = parse_double(source_name, ln);
        } else if (section == "link_budget") {
            if (ln.key == "tx_power_dbm") s.link_budget.tx_power_dbm = parse_double(source_name, ln);
            else if (ln.key == "tx_gain_dbi") s.link_budget.tx_ant_gain_dbi = parse_double(source_name, ln);
            else if (ln.key == "rx_gain_dbi") s.link_budget.rx_ant_gain_dbi = parse_double(source_name, ln);
            else if (ln.key == "nf_db") s.link_budget.nf_db = parse_double(source_name, ln);
            else s.link_budget.carrier_hz = parse_double(source_name, ln);
        } else if (section == "leakage") {
            if (ln.key == "delay_s") s.leakage.back().delay_s = parse_double(source_name, ln);
            else s.leakage.back().coupling_db = parse_double(source_name, ln);
        } else if (section == "target") {
            if (ln.key == "range_m") s.targets.back().range_m = parse_double(source_name, ln);
            else s.targets.back().rcs_dbsm = parse_double(source_name, ln);
        } else if (section == "adc") {
            if (ln.key == "fs") s.adc.fs_hz = parse_double(source_name, ln);
            else if (ln.key == "bits") s.adc.bits = parse_u32(source_name, ln);
            else s.adc.decimation = parse_u32(source_name, ln);
        } else if (section == "dds") {
            if (ln.key == "dac_rate") s.dds.dac_rate_hz = parse_double(source_name, ln);
            else if (ln.key == "table_len") s.dds.table_len = parse_u32(source_name, ln);
            else s.dds.dac_bits = parse_u32(source_name, ln);
        } else if (section == "combiner") {
            if (ln.key == "insertion_loss_db") s.combiner.insertion_loss_db = parse_double(source_name, ln);
            else if (ln.key == "replica_port_loss_db") s.combiner.replica_port_loss_db = parse_double(source_name, ln);
            else s.combiner.isolation_db = parse_double(source_name, ln);
        } else if (section == "noise") {
            if (ln.key == "enabled") s.noise.enabled = parse_bool(source_name, ln);
            else s.noise.flicker_corner_hz = parse_double(source_name, ln);
        } else if (section == "drift") {
            if (ln.key == "enabled") s.drift.enabled = parse_bool(source_name, ln);
            else if (ln.key == "phase_drift_rad_per_chirp")
                s.drift.phase_drift_rad_per_chirp = parse_double(source_name, ln);
            else s.drift.gain_drift_db_per_chirp = parse_double(source_name, ln);
        } else { // top level
            s.seed = parse_u64(source_name, ln);
        }
    }

    try {
        s.validate();
    } catch (const ScenarioError& e) {
        throw ScenarioError(std::string(source_name) + ": " + e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path_or_preset) {
    std::ifstream file(path_or_preset);
    if (!file) {
        if (is_preset(path_or_preset)) {
            return parse_scenario(preset_text(path_or_preset), path_or_preset);
        }
        throw ScenarioError("cannot open scenario '" + path_or_preset +
                            "' (not a file or bundled preset)");
    }
    std::ostringstream buf;
    buf << file.rdbuf();
    return parse_scenario(buf.str(), path_or_preset);
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string scenario_to_text(const Scenario& s) {
    std::ostringstream out;
    out << "seed = " << s.seed << "\n\n";
    out << "[chirp]\n";
    out << "f_start_hz = " << fmt(s.chirp.f_start_hz) << "\n";
    out << "f_stop_hz = " << fmt(s.chirp.f_stop_hz) << "\n";
    out << "t_chirp_s = " << fmt(s.chirp.t_chirp_s) << "\n";
    out << "amplitude = " << fmt(s.chirp.amplitude) << "\n";
    out << "phi0_rad = " << fmt(s.chirp.phi0_rad) << "\n\n";
    out << "[link_budget]\n";
    out << "tx_power_dbm = " << fmt(s.link_budget.tx_power_dbm) << "\n";
    out << "tx_gain_dbi = " << fmt(s.link_budget.tx_ant_gain_dbi) << "\n";
    out << "rx_gain_dbi = " << fmt(s.link_budget.rx_ant_gain_dbi) << "\n";
    out << "nf_db = " << fmt(s.link_budget.nf_db) << "\n";
    out << "carrier_hz = " << fmt(s.link_budget.carrier_hz) << "\n";
    for (const LeakageSpec& l : s.leakage) {
        out << "\n[leakage]\n";
        out << "delay_s = " << fmt(l.delay_s) << "\n";
        out << "coupling_db = " << fmt(l.coupling_db) << "\n";
    }
    for (const TargetSpec& t : s.targets) {
        out << "\n[target]\n";
        out << "range_m = " << fmt(t.range_m) << "\n";
        out << "rcs_dbsm = " << fmt(t.rcs_dbsm) << "\n";
    }
    out << "\n[adc]\n";
    out << "fs = " << fmt(s.adc.fs_hz) << "\n";
    out << "bits = " << s.adc.bits << "\n";
    out << "decimation = " << s.adc.decimation << "\n\n";
    out << "[dds]\n";
    out << "dac_rate = " << fmt(s.dds.dac_rate_hz) << "\n";
    out << "table_len = " << s.dds.table_len << "\n";
    out << "dac_bits = " << s.dds.dac_bits << "\n\n";
    out << "[combiner]\n";
    out << "insertion_loss_db = " << fmt(s.combiner.insertion_loss_db) << "\n";
    out << "replica_port_loss_db = " << fmt(s.combiner.replica_port_loss_db) << "\n";
    out << "isolation_db = " << fmt(s.combiner.isolation_db) << "\n\n";
    out << "[noise]\n";
    out << "enabled = " << (s.noise.enabled ? "true" : "false") << "\n";
    out << "flicker_corner_hz = " << fmt(s.noise.flicker_corner_hz) << "\n\n";
    out << "[drift]\n";
    out << "enabled = " << (s.drift.enabled ? "true" : "false") << "\n";
    out << "phase_drift_rad_per_chirp = " << fmt(s.drift.phase_drift_rad_per_chirp) << "\n";
    out << "gain_drift_db_per_chirp = " << fmt(s.drift.gain_drift_db_per_chirp) << "\n";
    return out.str();
}

} // namespace fmcw
