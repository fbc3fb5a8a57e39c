#include "fmcw/calibration.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fmcw/errors.hpp"

namespace fmcw {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string calibration_to_text(const CalibrationResult& r) {
    std::ostringstream out;
    out << "[tx_offset]\n";
    out << "step_index = " << r.tx_offset.step_index << "\n";
    out << "f_off_hz = " << fmt(r.tx_offset.f_off_hz) << "\n";
    for (const ToneParams& t : r.program.tones) {
        out << "\n[tone]\n";
        out << "freq_hz = " << fmt(t.freq_hz) << "\n";
        out << "amp = " << fmt(t.amp) << "\n";
        out << "phase_rad = " << fmt(t.phase_rad) << "\n";
    }
    out << "\n[metrics]\n";
    out << "suppression_db =";
    for (std::size_t i = 0; i < r.suppression_db.size(); ++i) {
        out << (i == 0 ? " " : ", ") << fmt(r.suppression_db[i]);
    }
    out << "\n";
    out << "residual_bin_dbm = " << fmt(r.residual_bin_dbm) << "\n";
    out << "rf_residual_dbm = " << fmt(r.rf_residual_dbm) << "\n";
    return out.str();
}

void save_calibration(const CalibrationResult& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw SimError("cannot write calibration file '" + path + "'");
    }
    out << calibration_to_text(r);
}

CalibrationResult load_calibration(const std::string& path, const DdsConfig& dds) {
    std::ifstream in(path);
    if (!in) {
        throw SimError("cannot open calibration file '" + path + "'");
    }

    CalibrationResult r;
    r.program.inverted = true;
    std::string section;
    std::string line;
    std::size_t line_no = 0;
    bool have_offset = false;

    auto fail = [&](const std::string& msg) {
        throw SimError(path + ":" + std::to_string(line_no) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.pop_back();
        }
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) {
            continue;
        }
        line = line.substr(start);

        if (line.front() == '[') {
            section = line.substr(1, line.find(']') - 1);
            if (section == "tone") {
                r.program.tones.emplace_back();
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail("expected 'key = value'");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));

        if (section == "tx_offset") {
            if (key == "step_index") {
                r.tx_offset.step_index = std::stoll(value);
                have_offset = true;
            } else if (key == "f_off_hz") {
                r.tx_offset.f_off_hz = std::stod(value);
            } else {
                fail("unknown key '" + key + "'");
            }
        } else if (section == "tone") {
            ToneParams& t = r.program.tones.back();
            if (key == "freq_hz") t.freq_hz = std::stod(value);
            else if (key == "amp") t.amp = std::stod(value);
            else if (key == "phase_rad") t.phase_rad = std::stod(value);
            else fail("unknown key '" + key + "'");
        } else if (section == "metrics") {
            if (key == "suppression_db") {
                std::istringstream list(value);
                std::string item;
                while (std::getline(list, item, ',')) {
                    r.suppression_db.push_back(std::stod(item));
                }
            } else if (key == "residual_bin_dbm") {
                r.residual_bin_dbm = std::stod(value);
            } else if (key == "rf_residual_dbm") {
                r.rf_residual_dbm = std::stod(value);
            } else {
                fail("unknown key '" + key + "'");
            }
        } else {
            fail("unknown section [" + section + "]");
        }
    }

    if (!have_offset) {
        throw SimError(path + ": missing [tx_offset] section");
    }
    // The grid index is authoritative; the stored frequency must agree with it.
    const TxOffsetSetting expect = make_tx_offset(r.tx_offset.step_index, dds);
    if (std::abs(expect.f_off_hz - r.tx_offset.f_off_hz) > 1e-9) {
        throw SimError(path + ": f_off_hz does not match step_index on the DDS grid");
    }
    r.tx_offset = expect;
    return r;
}

} // namespace fmcw
