#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsr/analysis.hpp"
#include "dsr/simulator.hpp"
#include "dsr/spectrum_plan.hpp"

namespace dsr {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Full scenario description. Defaults reproduce the reference deployment
/// (1000 m macro cells, small cell at (500, 0), 40 W GSM, 2/3/3 MHz bands,
/// 3 dB gap, four stock UE positions).
struct ScenarioConfig {
    NetworkGeometry geometry;           // r_s <= 0 derives from guard_area_fraction
    double guard_area_fraction = 0.25;  // of the sector area
    RadioParams radio;                  // p_l_w <= 0 triggers calibration
    AntennaPattern pattern;
    FadingModel fading;
    std::array<double, 3> bandwidths_hz{2e6, 3e6, 3e6};
    double lambda_ue = 0.0;  ///< <= 0: one UE per configured position
    std::vector<Vec2> ue_positions{{-22.1, 4.6}, {17.8, 25.7}, {-7.8, 41.5}, {30.0, -35.8}};

    int grid_rows = 6;
    int grid_cols = 6;
    Scheduler scheduler = Scheduler::proportional_fair;
    BsPlacement placement = BsPlacement::hex_grid;
    int n_drops = 200;
    int n_tti_per_drop = 500;
    double pf_window = 100.0;
    std::uint64_t seed = 12345;
    int n_workers = 0;
    double ppp_truncation_radius_m = 0.0;

    double inner_rel_tol = 1e-6;
    double outer_rel_tol = 1e-4;
    CochannelRadiusVariant r0_variant = CochannelRadiusVariant::theorem;
    double analysis_outer_radius_m = 0.0;  ///< <= 0: infinite field

    double reserved_hz = 1e6;
    double max_degradation_db = 1.0;
    std::vector<int> cell_ids{0, 1, 2};
    std::array<std::optional<int>, 3> reservation_overrides{};

    static ScenarioConfig defaults() { return {}; }
};

/// Parse and validate; throws ConfigError naming the offending field.
ScenarioConfig parse_scenario_config(const nlohmann::json& j);
ScenarioConfig load_scenario_config(const std::string& path);

/// Canonical effective form (defaults materialized, geometry resolved).
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

/// FNV-1a hash of the canonical form; stable across runs.
std::string config_hash(const ScenarioConfig& cfg);

/// Geometry with r_s materialized from the guard-area rule when unset.
NetworkGeometry resolved_geometry(const ScenarioConfig& cfg);

/// Small-cell power: configured value, or the 1 dB calibration rule.
double resolved_p_l(const ScenarioConfig& cfg);

/// Context with the resolved geometry and power; lambda_ue <= 0 maps to one
/// UE per configured position so analysis and simulation share the same
/// resource split.
AnalysisContext make_analysis_context(const ScenarioConfig& cfg);

SimConfig make_sim_config(const ScenarioConfig& cfg);

}  // namespace dsr
