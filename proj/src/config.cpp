#include "dsr/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "dsr/angles.hpp"

namespace dsr {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ConfigError("config." + field + ": " + msg);
}

void check_keys(const json& j, const std::string& scope, const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(scope, "expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) fail(scope.empty() ? key : scope + "." + key, "unknown field");
    }
}

double get_num(const json& j, const std::string& scope, const std::string& key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number()) fail(scope + "." + key, "expected a number");
    return j.at(key).get<double>();
}

std::int64_t get_int(const json& j, const std::string& scope, const std::string& key,
                     std::int64_t dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number_integer()) fail(scope + "." + key, "expected an integer");
    return j.at(key).get<std::int64_t>();
}

std::string get_str(const json& j, const std::string& scope, const std::string& key,
                    const std::string& dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_string()) fail(scope + "." + key, "expected a string");
    return j.at(key).get<std::string>();
}

}  // namespace

ScenarioConfig parse_scenario_config(const nlohmann::json& j) {
    ScenarioConfig cfg;
    check_keys(j, "",
               {"geometry", "radio", "bands", "pattern", "fading", "ue", "sim", "analysis",
                "plan"});

    if (j.contains("geometry")) {
        const json& g = j.at("geometry");
        check_keys(g, "geometry",
                   {"r_m", "d", "theta_rad", "r_c", "r_s", "delta_r_s", "guard_area_fraction"});
        cfg.geometry.r_m = get_num(g, "geometry", "r_m", cfg.geometry.r_m);
        cfg.geometry.d = get_num(g, "geometry", "d", cfg.geometry.d);
        cfg.geometry.theta = get_num(g, "geometry", "theta_rad", cfg.geometry.theta);
        cfg.geometry.r_c = get_num(g, "geometry", "r_c", cfg.geometry.r_c);
        cfg.geometry.r_s = get_num(g, "geometry", "r_s", 0.0);
        cfg.geometry.delta_r_s = get_num(g, "geometry", "delta_r_s", cfg.geometry.delta_r_s);
        cfg.guard_area_fraction =
            get_num(g, "geometry", "guard_area_fraction", cfg.guard_area_fraction);
    } else {
        cfg.geometry.r_s = 0.0;  // derive below
    }

    if (j.contains("radio")) {
        const json& r = j.at("radio");
        check_keys(r, "radio",
                   {"p_g_w", "p_l_w", "l0", "alpha", "noise_psd_dbm_hz", "eta_db",
                    "wavelength_m"});
        cfg.radio.p_g_w = get_num(r, "radio", "p_g_w", cfg.radio.p_g_w);
        cfg.radio.p_l_w = get_num(r, "radio", "p_l_w", 0.0);
        cfg.radio.l0 = get_num(r, "radio", "l0", 0.0);
        cfg.radio.alpha = get_num(r, "radio", "alpha", cfg.radio.alpha);
        cfg.radio.noise_psd_w_hz =
            dbm_to_watt(get_num(r, "radio", "noise_psd_dbm_hz", -174.0));
        cfg.radio.eta = db_to_linear(get_num(r, "radio", "eta_db", 3.0));
        cfg.radio.wavelength_m = get_num(r, "radio", "wavelength_m", cfg.radio.wavelength_m);
    }

    if (j.contains("bands")) {
        const json& b = j.at("bands");
        check_keys(b, "bands", {"b1_hz", "b2_hz", "b3_hz"});
        cfg.bandwidths_hz[0] = get_num(b, "bands", "b1_hz", cfg.bandwidths_hz[0]);
        cfg.bandwidths_hz[1] = get_num(b, "bands", "b2_hz", cfg.bandwidths_hz[1]);
        cfg.bandwidths_hz[2] = get_num(b, "bands", "b3_hz", cfg.bandwidths_hz[2]);
    }

    if (j.contains("pattern")) {
        check_keys(j.at("pattern"), "pattern", {"kind"});
        const std::string kind = get_str(j.at("pattern"), "pattern", "kind", "tri_sector_3gpp");
        if (kind == "omni") cfg.pattern.kind = AntennaPattern::Kind::omni;
        else if (kind == "tri_sector_3gpp") cfg.pattern.kind = AntennaPattern::Kind::tri_sector_3gpp;
        else fail("pattern.kind", "must be 'omni' or 'tri_sector_3gpp'");
    }

    if (j.contains("fading")) {
        check_keys(j.at("fading"), "fading", {"kind"});
        const std::string kind = get_str(j.at("fading"), "fading", "kind", "rayleigh");
        if (kind == "rayleigh") cfg.fading.kind = FadingModel::Kind::rayleigh;
        else if (kind == "deterministic_unit") cfg.fading.kind = FadingModel::Kind::deterministic_unit;
        else fail("fading.kind", "must be 'rayleigh' or 'deterministic_unit'");
    }

    if (j.contains("ue")) {
        const json& u = j.at("ue");
        check_keys(u, "ue", {"lambda_ue_per_m2", "positions"});
        cfg.lambda_ue = get_num(u, "ue", "lambda_ue_per_m2", 0.0);
        if (u.contains("positions")) {
            if (!u.at("positions").is_array()) fail("ue.positions", "expected an array of [x, y]");
            cfg.ue_positions.clear();
            for (const auto& p : u.at("positions")) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                    fail("ue.positions", "each entry must be a numeric pair [x, y]");
                cfg.ue_positions.push_back({p[0].get<double>(), p[1].get<double>()});
            }
        }
    }

    if (j.contains("sim")) {
        const json& s = j.at("sim");
        check_keys(s, "sim",
                   {"grid_rows", "grid_cols", "scheduler", "placement", "n_drops",
                    "n_tti_per_drop", "pf_window", "seed", "n_workers",
                    "ppp_truncation_radius_m"});
        cfg.grid_rows = static_cast<int>(get_int(s, "sim", "grid_rows", cfg.grid_rows));
        cfg.grid_cols = static_cast<int>(get_int(s, "sim", "grid_cols", cfg.grid_cols));
        const std::string sched = get_str(s, "sim", "scheduler", "proportional_fair");
        if (sched == "round_robin") cfg.scheduler = Scheduler::round_robin;
        else if (sched == "proportional_fair") cfg.scheduler = Scheduler::proportional_fair;
        else fail("sim.scheduler", "must be 'round_robin' or 'proportional_fair'");
        const std::string placement = get_str(s, "sim", "placement", "hex_grid");
        if (placement == "hex_grid") cfg.placement = BsPlacement::hex_grid;
        else if (placement == "ppp") cfg.placement = BsPlacement::ppp;
        else fail("sim.placement", "must be 'hex_grid' or 'ppp'");
        cfg.n_drops = static_cast<int>(get_int(s, "sim", "n_drops", cfg.n_drops));
        cfg.n_tti_per_drop =
            static_cast<int>(get_int(s, "sim", "n_tti_per_drop", cfg.n_tti_per_drop));
        cfg.pf_window = get_num(s, "sim", "pf_window", cfg.pf_window);
        cfg.seed = static_cast<std::uint64_t>(get_int(s, "sim", "seed", 12345));
        cfg.n_workers = static_cast<int>(get_int(s, "sim", "n_workers", 0));
        cfg.ppp_truncation_radius_m = get_num(s, "sim", "ppp_truncation_radius_m", 0.0);
    }

    if (j.contains("analysis")) {
        const json& a = j.at("analysis");
        check_keys(a, "analysis",
                   {"inner_rel_tol", "outer_rel_tol", "r0_variant", "outer_radius_m"});
        cfg.inner_rel_tol = get_num(a, "analysis", "inner_rel_tol", cfg.inner_rel_tol);
        cfg.outer_rel_tol = get_num(a, "analysis", "outer_rel_tol", cfg.outer_rel_tol);
        const std::string variant = get_str(a, "analysis", "r0_variant", "theorem");
        if (variant == "theorem") cfg.r0_variant = CochannelRadiusVariant::theorem;
        else if (variant == "proof") cfg.r0_variant = CochannelRadiusVariant::proof;
        else fail("analysis.r0_variant", "must be 'theorem' or 'proof'");
        cfg.analysis_outer_radius_m = get_num(a, "analysis", "outer_radius_m", 0.0);
    }

    if (j.contains("plan")) {
        const json& p = j.at("plan");
        check_keys(p, "plan",
                   {"reserved_mhz", "max_degradation_db", "cell_ids", "reservation_overrides"});
        cfg.reserved_hz = get_num(p, "plan", "reserved_mhz", 1.0) * 1e6;
        cfg.max_degradation_db = get_num(p, "plan", "max_degradation_db", 1.0);
        if (p.contains("cell_ids")) {
            if (!p.at("cell_ids").is_array()) fail("plan.cell_ids", "expected an array of ints");
            cfg.cell_ids.clear();
            for (const auto& id : p.at("cell_ids")) {
                if (!id.is_number_integer()) fail("plan.cell_ids", "entries must be integers");
                cfg.cell_ids.push_back(id.get<int>());
            }
        }
        if (p.contains("reservation_overrides")) {
            const auto& o = p.at("reservation_overrides");
            if (!o.is_array() || o.size() != 3)
                fail("plan.reservation_overrides", "expected [s1, s2, s3]; use -1 to keep default");
            for (int s = 0; s < 3; ++s) {
                if (!o[s].is_number_integer())
                    fail("plan.reservation_overrides", "entries must be integers");
                const int v = o[s].get<int>();
                if (v >= 0) cfg.reservation_overrides[static_cast<std::size_t>(s)] = v;
            }
        }
    }

    // Cross-field consistency.
    const double occupied =
        cfg.bandwidths_hz[0] + cfg.bandwidths_hz[1] + cfg.bandwidths_hz[2] + cfg.reserved_hz;
    if (std::abs(occupied - 9e6) > 1.0)
        fail("bands", "b1+b2+b3+reserved must equal the 9 MHz PRB span, got " +
                          std::to_string(occupied / 1e6) + " MHz");
    if (cfg.guard_area_fraction <= 0.0 || cfg.guard_area_fraction > 1.0)
        fail("geometry.guard_area_fraction", "must lie in (0, 1]");
    if (cfg.n_drops < 1) fail("sim.n_drops", "must be >= 1");
    if (cfg.n_tti_per_drop < 1) fail("sim.n_tti_per_drop", "must be >= 1");
    if (!(cfg.pf_window >= 1.0)) fail("sim.pf_window", "must be >= 1");
    if (!(cfg.inner_rel_tol > 0.0) || !(cfg.outer_rel_tol > 0.0))
        fail("analysis", "tolerances must be > 0");
    if (cfg.cell_ids.empty()) fail("plan.cell_ids", "must allow at least one cell ID");

    try {
        resolved_geometry(cfg).validate();
        cfg.radio.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_scenario_config(j);
}

NetworkGeometry resolved_geometry(const ScenarioConfig& cfg) {
    NetworkGeometry g = cfg.geometry;
    if (!(g.r_s > 0.0)) {
        const double sector_area = std::sqrt(3.0) / 2.0 * g.r_m * g.r_m;  // hexagon / 3
        g.r_s = size_guard_region(sector_area, cfg.guard_area_fraction);
    }
    return g;
}

nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
    const NetworkGeometry g = resolved_geometry(cfg);
    json j;
    j["geometry"] = {{"r_m", g.r_m},
                     {"d", g.d},
                     {"theta_rad", g.theta},
                     {"r_c", g.r_c},
                     {"r_s", g.r_s},
                     {"delta_r_s", g.delta_r_s},
                     {"guard_area_fraction", cfg.guard_area_fraction}};
    j["radio"] = {{"p_g_w", cfg.radio.p_g_w},
                  {"p_l_w", cfg.radio.p_l_w},
                  {"l0", cfg.radio.effective_l0()},
                  {"alpha", cfg.radio.alpha},
                  {"noise_psd_w_hz", cfg.radio.noise_psd_w_hz},
                  {"eta", cfg.radio.eta},
                  {"wavelength_m", cfg.radio.wavelength_m}};
    j["bands"] = {{"b1_hz", cfg.bandwidths_hz[0]},
                  {"b2_hz", cfg.bandwidths_hz[1]},
                  {"b3_hz", cfg.bandwidths_hz[2]}};
    j["pattern"] = cfg.pattern.kind == AntennaPattern::Kind::omni ? "omni" : "tri_sector_3gpp";
    j["fading"] =
        cfg.fading.kind == FadingModel::Kind::rayleigh ? "rayleigh" : "deterministic_unit";
    json positions = json::array();
    for (const Vec2& p : cfg.ue_positions) positions.push_back({p.x, p.y});
    j["ue"] = {{"lambda_ue_per_m2", cfg.lambda_ue}, {"positions", positions}};
    // n_workers is execution plumbing, not physics: results are worker-count
    // invariant, so it stays out of the canonical form and the hash.
    j["sim"] = {{"grid_rows", cfg.grid_rows},
                {"grid_cols", cfg.grid_cols},
                {"scheduler",
                 cfg.scheduler == Scheduler::round_robin ? "round_robin" : "proportional_fair"},
                {"placement", cfg.placement == BsPlacement::hex_grid ? "hex_grid" : "ppp"},
                {"n_drops", cfg.n_drops},
                {"n_tti_per_drop", cfg.n_tti_per_drop},
                {"pf_window", cfg.pf_window},
                {"seed", cfg.seed},
                {"ppp_truncation_radius_m", cfg.ppp_truncation_radius_m}};
    j["analysis"] = {{"inner_rel_tol", cfg.inner_rel_tol},
                     {"outer_rel_tol", cfg.outer_rel_tol},
                     {"r0_variant",
                      cfg.r0_variant == CochannelRadiusVariant::theorem ? "theorem" : "proof"},
                     {"outer_radius_m", cfg.analysis_outer_radius_m}};
    json overrides = json::array();
    for (const auto& o : cfg.reservation_overrides) overrides.push_back(o ? *o : -1);
    j["plan"] = {{"reserved_mhz", cfg.reserved_hz / 1e6},
                 {"max_degradation_db", cfg.max_degradation_db},
                 {"cell_ids", cfg.cell_ids},
                 {"reservation_overrides", overrides}};
    return j;
}

std::string config_hash(const ScenarioConfig& cfg) {
    const std::string canon = scenario_to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

double resolved_p_l(const ScenarioConfig& cfg) {
    if (cfg.radio.p_l_w > 0.0) return cfg.radio.p_l_w;
    ScenarioConfig base = cfg;
    base.radio.p_l_w = 0.0;
    const NetworkGeometry g = resolved_geometry(base);
    AnalysisContext ctx;
    ctx.geometry = g;
    ctx.radio = base.radio;
    ctx.pattern = base.pattern;
    ctx.interferer_fading = base.fading;
    ctx.plan = band_plan_from_geometry(g, base.bandwidths_hz, base.lambda_ue);
    ctx.inner_quad.rel_tol = base.inner_rel_tol;
    ctx.outer_quad.rel_tol = base.outer_rel_tol;
    ctx.r0_variant = base.r0_variant;
    return calibrate_power(g, base.radio, ctx, base.max_degradation_db);
}

AnalysisContext make_analysis_context(const ScenarioConfig& cfg) {
    AnalysisContext ctx;
    ctx.geometry = resolved_geometry(cfg);
    ctx.radio = cfg.radio;
    ctx.radio.p_l_w = resolved_p_l(cfg);
    ctx.pattern = cfg.pattern;
    ctx.interferer_fading = cfg.fading;
    double lambda_ue = cfg.lambda_ue;
    if (lambda_ue <= 0.0) {
        const double area = kPi * ctx.geometry.r_c * ctx.geometry.r_c;
        lambda_ue = static_cast<double>(std::max<std::size_t>(cfg.ue_positions.size(), 1)) / area;
    }
    ctx.plan = band_plan_from_geometry(ctx.geometry, cfg.bandwidths_hz, lambda_ue);
    ctx.inner_quad.rel_tol = cfg.inner_rel_tol;
    ctx.outer_quad.rel_tol = cfg.outer_rel_tol;
    ctx.r0_variant = cfg.r0_variant;
    if (cfg.analysis_outer_radius_m > 0.0) ctx.outer_radius_m = cfg.analysis_outer_radius_m;
    return ctx;
}

SimConfig make_sim_config(const ScenarioConfig& cfg) {
    SimConfig sim;
    sim.geometry = resolved_geometry(cfg);
    sim.grid_rows = cfg.grid_rows;
    sim.grid_cols = cfg.grid_cols;
    sim.radio = cfg.radio;
    sim.radio.p_l_w = resolved_p_l(cfg);
    sim.pattern = cfg.pattern;
    sim.fading = cfg.fading;
    sim.scheduler = cfg.scheduler;
    sim.placement = cfg.placement;
    sim.r0_variant = cfg.r0_variant;
    sim.bandwidths_hz = cfg.bandwidths_hz;
    sim.n_drops = cfg.n_drops;
    sim.n_tti_per_drop = cfg.n_tti_per_drop;
    sim.pf_window = cfg.pf_window;
    sim.seed = cfg.seed;
    sim.n_workers = cfg.n_workers;
    sim.ppp_truncation_radius_m = cfg.ppp_truncation_radius_m;
    return sim;
}

}  // namespace dsr
