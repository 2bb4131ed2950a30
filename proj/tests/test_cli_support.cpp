#include <doctest.h>

#include <json.hpp>

#include "dsr/config.hpp"
#include "dsr/results.hpp"
#include "test_helpers.hpp"

using namespace dsr;
using nlohmann::json;

TEST_CASE("defaults and derived guard radius") {
    const ScenarioConfig cfg = parse_scenario_config(json::object());
    const NetworkGeometry g = resolved_geometry(cfg);
    CHECK(g.r_m == 1000.0);
    CHECK(g.d == 500.0);
    CHECK(g.r_s == doctest::Approx(test::kTable1Rs).epsilon(1e-12));
    CHECK(cfg.ue_positions.size() == 4);
    CHECK(cfg.radio.p_g_w == 40.0);

    // explicit r_s wins over the area rule
    const ScenarioConfig pinned =
        parse_scenario_config(json::parse(R"({"geometry": {"r_s": 300.0}})"));
    CHECK(resolved_geometry(pinned).r_s == 300.0);
}

TEST_CASE("field-level validation messages") {
    auto message_of = [](const json& j) {
        try {
            parse_scenario_config(j);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message_of(json::parse(R"({"geometry": {"r_m": -5}})")).find("r_m") !=
          std::string::npos);
    CHECK(message_of(json::parse(R"({"geometry": {"bogus": 1}})")).find("bogus") !=
          std::string::npos);
    CHECK(message_of(json::parse(R"({"bands": {"b1_hz": 5e6}})")).find("bands") !=
          std::string::npos);
    CHECK(message_of(json::parse(R"({"sim": {"scheduler": "fifo"}})")).find("scheduler") !=
          std::string::npos);
    CHECK(message_of(json::parse(R"({"radio": {"alpha": 1.5}})")).find("alpha") !=
          std::string::npos);
    CHECK(message_of(json::parse(R"({"plan": {"cell_ids": []}})")).find("cell_ids") !=
          std::string::npos);
}

TEST_CASE("config hash tracks semantic changes only") {
    const ScenarioConfig base = parse_scenario_config(json::object());
    // restating a default leaves the hash unchanged
    const ScenarioConfig restated =
        parse_scenario_config(json::parse(R"({"sim": {"seed": 12345}})"));
    CHECK(config_hash(base) == config_hash(restated));

    const ScenarioConfig reseeded =
        parse_scenario_config(json::parse(R"({"sim": {"seed": 12346}})"));
    CHECK(config_hash(base) != config_hash(reseeded));
    const ScenarioConfig moved =
        parse_scenario_config(json::parse(R"({"geometry": {"d": 350.0}})"));
    CHECK(config_hash(base) != config_hash(moved));
}

TEST_CASE("power resolution: calibration fallback and explicit override") {
    ScenarioConfig cfg = parse_scenario_config(json::object());
    const double calibrated = resolved_p_l(cfg);
    CHECK(calibrated > 0.0);
    CHECK(calibrated < 1.0);  // small cells run at very low power here

    const AnalysisContext ctx = make_analysis_context(cfg);
    CHECK(ctx.radio.p_l_w == calibrated);
    CHECK(calibrate_power(ctx.geometry, cfg.radio, ctx, cfg.max_degradation_db) ==
          doctest::Approx(calibrated).epsilon(1e-9));

    cfg.radio.p_l_w = 0.5;
    CHECK(resolved_p_l(cfg) == 0.5);
}

TEST_CASE("ue normalization defaults to one share per configured position") {
    const ScenarioConfig cfg = parse_scenario_config(json::object());
    const AnalysisContext ctx = make_analysis_context(cfg);
    CHECK(expected_ue_count(ctx) == doctest::Approx(4.0).epsilon(1e-12));

    const ScenarioConfig dense =
        parse_scenario_config(json::parse(R"({"ue": {"lambda_ue_per_m2": 0.001}})"));
    const AnalysisContext dctx = make_analysis_context(dense);
    CHECK(expected_ue_count(dctx) ==
          doctest::Approx(0.001 * kPi * 50.0 * 50.0).epsilon(1e-12));
}

TEST_CASE("sim config mirrors the scenario") {
    const ScenarioConfig cfg = parse_scenario_config(
        json::parse(R"({"sim": {"placement": "ppp", "n_drops": 7, "scheduler": "round_robin"}})"));
    const SimConfig sim = make_sim_config(cfg);
    CHECK(sim.placement == BsPlacement::ppp);
    CHECK(sim.n_drops == 7);
    CHECK(sim.scheduler == Scheduler::round_robin);
    CHECK(sim.radio.p_l_w == doctest::Approx(resolved_p_l(cfg)));
}

TEST_CASE("result bundle round-trips byte-identically") {
    ResultBundle bundle;
    bundle.config_hash = "00ff00ff00ff00ff";
    bundle.seed = 12345;
    bundle.config = scenario_to_json(ScenarioConfig::defaults());
    bundle.add_row("rate", {{"ue_x", -22.1}, {"ue_y", 4.6}, {"rate_bps", 1.0 / 3.0}});
    bundle.add_row("rate", {{"ue_x", 17.8}, {"ue_y", 25.7}, {"rate_bps", 7.962143411069972e-16}});
    bundle.add_row("outage", {{"threshold_db", 0.5}, {"p_out", 0.1}});

    const std::string once = serialize_bundle(bundle);
    const ResultBundle reread = bundle_from_json(nlohmann::json::parse(once));
    const std::string twice = serialize_bundle(reread);
    CHECK(once == twice);

    // every row carries the producing hash
    for (const auto& row : reread.tables.at("rate"))
        CHECK(row.at("config_hash").get<std::string>() == "00ff00ff00ff00ff");
    CHECK(reread.timestamp.empty());  // no wall clock unless explicitly stamped
}

TEST_CASE("deterministic number formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(262.518783952166) == "262.518783952166");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(csv_line({"a", "b", "1.5"}) == "a,b,1.5\n");
}
