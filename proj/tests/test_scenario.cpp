#include <catch2/catch_amalgamated.hpp>

#include "fmcw/scenario.hpp"

using namespace fmcw;

TEST_CASE("bundled presets parse and validate") {
    for (const std::string& name : preset_names()) {
        const Scenario s = load_scenario(name);
        CHECK(s.chirp.f_start_hz == 135e9);
        CHECK(s.adc.fs_hz == 100e6);
    }
    const Scenario p10 = load_scenario("paper_10cm");
    REQUIRE(p10.leakage.size() == 1);
    CHECK(p10.leakage[0].delay_s == 123.4e-12);
    CHECK(p10.leakage[0].coupling_db == -30.0);
    REQUIRE(p10.targets.size() == 1);
    CHECK(p10.targets[0].range_m == 0.10);
    CHECK(p10.fft_length() == 1000);
    CHECK(p10.rbw_hz() == Catch::Approx(10e3));

    const Scenario p20 = load_scenario("paper_20cm");
    CHECK(p20.targets[0].range_m == 0.20);

    const Scenario p3 = load_scenario("paper_3path");
    CHECK(p3.leakage.size() == 3);
}

TEST_CASE("shipped scenario files match the embedded presets") {
    for (const std::string& name : preset_names()) {
        const Scenario from_file =
            load_scenario(std::string(FMCW_SOURCE_DIR) + "/scenarios/" + name + ".scn");
        const Scenario embedded = load_scenario(name);
        CHECK(scenario_to_text(from_file) == scenario_to_text(embedded));
    }
}

TEST_CASE("scenario text round-trips") {
    const Scenario s = load_scenario("paper_3path");
    const std::string text = scenario_to_text(s);
    const Scenario reparsed = parse_scenario(text, "roundtrip");
    CHECK(scenario_to_text(reparsed) == text);
}

TEST_CASE("strict schema: unknown keys and sections carry line numbers") {
    SECTION("unknown key") {
        const std::string bad = "[chirp]\nf_start_hz = 1e9\nbogus_key = 3\n";
        try {
            parse_scenario(bad, "test.scn");
            FAIL("expected ScenarioError");
        } catch (const ScenarioError& e) {
            CHECK(std::string(e.what()).find("test.scn:3") != std::string::npos);
            CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
        }
    }

    SECTION("misspelled key is rejected, never defaulted") {
        const std::string bad = "[adc]\nfss = 100e6\n";
        CHECK_THROWS_AS(parse_scenario(bad, "x"), ScenarioError);
    }

    SECTION("unknown section") {
        CHECK_THROWS_AS(parse_scenario("[nonsense]\n", "x"), ScenarioError);
    }

    SECTION("duplicate key within a section") {
        const std::string bad = "[chirp]\nf_start_hz = 1e9\nf_start_hz = 2e9\n";
        CHECK_THROWS_AS(parse_scenario(bad, "x"), ScenarioError);
    }

    SECTION("malformed number") {
        const std::string bad = "[chirp]\nf_start_hz = fast\n";
        try {
            parse_scenario(bad, "y.scn");
            FAIL("expected ScenarioError");
        } catch (const ScenarioError& e) {
            CHECK(std::string(e.what()).find("y.scn:2") != std::string::npos);
        }
    }
}

TEST_CASE("cross-field validation") {
    Scenario s = load_scenario("paper_10cm");

    SECTION("decimation must divide the chirp sample count") {
        s.adc.decimation = 3;
        CHECK_THROWS_AS(s.validate(), ScenarioError);
    }

    SECTION("carrier must sit inside the sweep") {
        s.link_budget.carrier_hz = 100e9;
        CHECK_THROWS_AS(s.validate(), ScenarioError);
    }

    SECTION("beats must stay inside the decimated band") {
        s.leakage[0].delay_s = 100e-9; // 10 MHz beat > 5 MHz
        CHECK_THROWS_AS(s.validate(), ScenarioError);
    }

    SECTION("positive coupling rejected") {
        s.leakage[0].coupling_db = 3.0;
        CHECK_THROWS_AS(s.validate(), ScenarioError);
    }
}

TEST_CASE("unknown preset and missing file") {
    CHECK_THROWS_AS(load_scenario("no_such_preset"), ScenarioError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/path.scn"), ScenarioError);
}
