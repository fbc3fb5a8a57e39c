#include "fmcw/scenario.hpp"

#include "fmcw/errors.hpp"

namespace fmcw {

namespace {

// Link budget, chirp, converter and DDS settings follow the system simulation
// setup this library models; the dominant leakage delay defaults to 123.4 ps
// (beat 12.34 kHz, deliberately off the 10 kHz bin grid) so the TX-offset
// alignment step has real work to do.
constexpr const char* kPaper10cm = R"(# Bundled preset: single -30 dB leakage path, hand-sized target at 10 cm.
seed = 12345

[chirp]
f_start_hz = 135e9
f_stop_hz = 145e9
t_chirp_s = 100e-6
amplitude = 1.0

[link_budget]
tx_power_dbm = 10
tx_gain_dbi = 0
rx_gain_dbi = 0
nf_db = 15
carrier_hz = 140e9

[leakage]
delay_s = 123.4e-12
coupling_db = -30

[target]
range_m = 0.10
rcs_dbsm = -40

[adc]
fs = 100e6
bits = 16
decimation = 10

[dds]
dac_rate = 10e6
table_len = 16384
dac_bits = 16

[noise]
enabled = true
flicker_corner_hz = 0
)";

constexpr const char* kPaper20cm = R"(# Bundled preset: single -30 dB leakage path, hand-sized target at 20 cm.
seed = 12345

[chirp]
f_start_hz = 135e9
f_stop_hz = 145e9
t_chirp_s = 100e-6
amplitude = 1.0

[link_budget]
tx_power_dbm = 10
tx_gain_dbi = 0
rx_gain_dbi = 0
nf_db = 15
carrier_hz = 140e9

[leakage]
delay_s = 123.4e-12
coupling_db = -30

[target]
range_m = 0.20
rcs_dbsm = -40

[adc]
fs = 100e6
bits = 16
decimation = 10

[dds]
dac_rate = 10e6
table_len = 16384
dac_bits = 16

[noise]
enabled = true
flicker_corner_hz = 0
)";

constexpr const char* kPaper3Path = R"(# Bundled preset: three leakage paths (array-style self-interference), no target.
seed = 12345

[chirp]
f_start_hz = 135e9
f_stop_hz = 145e9
t_chirp_s = 100e-6
amplitude = 1.0

[link_budget]
tx_power_dbm = 10
tx_gain_dbi = 0
rx_gain_dbi = 0
nf_db = 15
carrier_hz = 140e9

[leakage]
delay_s = 123.4e-12
coupling_db = -30

[leakage]
delay_s = 250e-12
coupling_db = -40

[leakage]
delay_s = 400e-12
coupling_db = -45

[adc]
fs = 100e6
bits = 16
decimation = 10

[dds]
dac_rate = 10e6
table_len = 16384
dac_bits = 16

[noise]
enabled = true
flicker_corner_hz = 0
)";

struct Preset {
    const char* name;
    const char* text;
};

constexpr Preset kPresets[] = {
    {"paper_10cm", kPaper10cm},
    {"paper_20cm", kPaper20cm},
    {"paper_3path", kPaper3Path},
};

} // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const Preset& p : kPresets) {
        names.emplace_back(p.name);
    }
    return names;
}

bool is_preset(std::string_view name) {
    for (const Preset& p : kPresets) {
        if (name == p.name) {
            return true;
        }
    }
    return false;
}

std::string preset_text(std::string_view name) {
    for (const Preset& p : kPresets) {
        if (name == p.name) {
            return p.text;
        }
    }
    throw ScenarioError("unknown preset '" + std::string(name) + "'");
}

} // namespace fmcw
