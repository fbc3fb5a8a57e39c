#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fmcw/channel.hpp"
#include "fmcw/dsp.hpp"
#include "fmcw/frontend.hpp"
#include "fmcw/signal_model.hpp"

namespace fmcw {

// Full experiment description. Serialized as a sectioned key = value text file;
// the parser is strict (unknown sections or keys are errors with line numbers).
struct Scenario {
    ChirpConfig chirp;
    LinkBudget link_budget;
    std::vector<LeakageSpec> leakage;
    std::vector<TargetSpec> targets;
    AdcConfig adc;
    DdsConfig dds;
    CombinerModel combiner;
    NoiseConfig noise;
    DriftConfig drift;
    std::uint64_t seed = 0;

    std::size_t adc_samples_per_chirp() const;
    std::size_t fft_length() const;
    double decimated_rate_hz() const { return adc.fs_hz / adc.decimation; }
    double rbw_hz() const;

    // Cross-field invariants; throws ScenarioError with a description.
    void validate() const;
};

// Parse scenario text. `source_name` labels error messages (file name or preset).
// Throws ScenarioError with "<source>:<line>: ..." on any schema violation.
Scenario parse_scenario(std::string_view text, std::string_view source_name);

// Load from file, or fall back to a bundled preset when `path_or_preset` names one.
Scenario load_scenario(const std::string& path_or_preset);

// Canonical text form (stable key order, round-trips through parse_scenario).
std::string scenario_to_text(const Scenario& s);

// Bundled presets.
std::vector<std::string> preset_names();
bool is_preset(std::string_view name);
std::string preset_text(std::string_view name); // throws ScenarioError if unknown

} // namespace fmcw
