#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsr/analysis.hpp"
#include "dsr/angles.hpp"
#include "dsr/config.hpp"
#include "dsr/results.hpp"
#include "dsr/simulator.hpp"
#include "dsr/spectrum_plan.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInfeasible = 4;

using dsr::format_double;

std::vector<dsr::Vec2> parse_positions(const std::string& text) {
    std::vector<dsr::Vec2> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(start, end - start);
        double x = 0.0, y = 0.0;
        if (std::sscanf(item.c_str(), "%lf,%lf", &x, &y) != 2)
            throw dsr::ConfigError("cannot parse position '" + item + "' (expected x,y)");
        out.push_back({x, y});
        start = end + 1;
    }
    return out;
}

std::vector<double> parse_range(const std::string& text) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    const int n = std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step);
    if (n == 1) return {lo};
    if (n != 3 || step <= 0.0)
        throw dsr::ConfigError("cannot parse range '" + text + "' (expected lo:hi:step)");
    std::vector<double> out;
    for (double v = lo; v <= hi + 1e-9 * step; v += step) out.push_back(v);
    return out;
}

std::string iso_timestamp() {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    bool stamp = false;
};

dsr::ScenarioConfig load_config(const CommonOpts& opts) {
    if (opts.config_path.empty()) return dsr::ScenarioConfig::defaults();
    return dsr::load_scenario_config(opts.config_path);
}

dsr::ResultBundle make_bundle(const dsr::ScenarioConfig& cfg, const CommonOpts& opts) {
    dsr::ResultBundle bundle;
    bundle.config_hash = dsr::config_hash(cfg);
    bundle.seed = cfg.seed;
    bundle.config = dsr::scenario_to_json(cfg);
    if (opts.stamp) bundle.timestamp = iso_timestamp();
    return bundle;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Scenario config (JSON); defaults if omitted");
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_flag("--stamp", opts.stamp, "Record a wall-clock timestamp in the bundle");
}

void ensure_out_dir(const CommonOpts& opts) {
    std::filesystem::create_directories(opts.out_dir);
}

int cmd_rate(const CommonOpts& opts, const std::string& positions_text, const std::string& mode,
             const std::string& drop_log_path) {
    dsr::ScenarioConfig cfg = load_config(opts);
    if (!positions_text.empty()) cfg.ue_positions = parse_positions(positions_text);
    if (cfg.ue_positions.empty())
        throw dsr::ConfigError("rate: UE position list must not be empty");
    const dsr::NetworkGeometry geom = dsr::resolved_geometry(cfg);
    for (const dsr::Vec2& p : cfg.ue_positions) {
        if (p.norm() > geom.r_c + 1e-9)
            throw dsr::ConfigError("rate: UE position (" + format_double(p.x) + "," +
                                   format_double(p.y) + ") lies outside r_c");
    }
    const bool want_analysis = mode == "analysis" || mode == "both";
    const bool want_sim = mode == "sim" || mode == "both";

    ensure_out_dir(opts);
    dsr::ResultBundle bundle = make_bundle(cfg, opts);
    std::string csv = "ue_x,ue_y,mode,rate_bps,ci_halfwidth\n";

    std::vector<double> analysis_rates;
    if (want_analysis) {
        const dsr::AnalysisContext ctx = dsr::make_analysis_context(cfg);
        for (const dsr::Vec2& p : cfg.ue_positions) {
            const double rate = dsr::lte_user_rate(p.norm(), ctx);
            analysis_rates.push_back(rate);
            csv += dsr::csv_line({format_double(p.x), format_double(p.y), "analysis",
                                  format_double(rate), "0"});
            bundle.add_row("rate", {{"ue_x", p.x},
                                    {"ue_y", p.y},
                                    {"mode", "analysis"},
                                    {"rate_bps", rate},
                                    {"ci_halfwidth", 0.0}});
        }
    }
    dsr::RateSimResult sim;
    if (want_sim) {
        const dsr::SimConfig sim_cfg = dsr::make_sim_config(cfg);
        std::ofstream log;
        dsr::DropLogSink sink;
        if (!drop_log_path.empty()) {
            log.open(drop_log_path);
            if (!log) throw dsr::ConfigError("rate: cannot open drop log " + drop_log_path);
            log << "drop_id,tti,ue_id,band,sinr_db,scheduled\n";
            sink = [&log](const dsr::DropLogRow& row) {
                log << row.drop << ',' << row.tti << ',' << row.ue << ',' << row.band << ','
                    << format_double(row.sinr_db) << ',' << (row.scheduled ? 1 : 0) << '\n';
            };
        }
        sim = dsr::run_rate_sim(sim_cfg, cfg.ue_positions, sink);
        for (std::size_t u = 0; u < cfg.ue_positions.size(); ++u) {
            const dsr::Vec2& p = cfg.ue_positions[u];
            csv += dsr::csv_line({format_double(p.x), format_double(p.y), "sim",
                                  format_double(sim.per_ue[u].mean_rate_bps),
                                  format_double(sim.per_ue[u].ci_halfwidth)});
            bundle.add_row("rate", {{"ue_x", p.x},
                                    {"ue_y", p.y},
                                    {"mode", "sim"},
                                    {"rate_bps", sim.per_ue[u].mean_rate_bps},
                                    {"ci_halfwidth", sim.per_ue[u].ci_halfwidth}});
        }
    }
    if (mode == "both") {
        std::printf("%-18s %12s %12s %10s %9s\n", "ue_position", "sim_mbps", "analysis_mbps",
                    "gap_mbps", "gap/sim");
        for (std::size_t u = 0; u < cfg.ue_positions.size(); ++u) {
            const double s = sim.per_ue[u].mean_rate_bps;
            const double a = analysis_rates[u];
            const dsr::Vec2& p = cfg.ue_positions[u];
            std::printf("(%6.1f,%6.1f)    %12.2f %12.2f %10.2f %9.3f\n", p.x, p.y, s / 1e6,
                        a / 1e6, (s - a) / 1e6, (s - a) / s);
            bundle.add_row("rate_gap", {{"ue_x", p.x},
                                        {"ue_y", p.y},
                                        {"sim_bps", s},
                                        {"analysis_bps", a},
                                        {"gap_bps", s - a},
                                        {"gap_over_sim", (s - a) / s}});
        }
    }
    dsr::write_text_file(opts.out_dir + "/rate.csv", csv);
    dsr::write_bundle(opts.out_dir + "/bundle.json", bundle);
    return kExitOk;
}

int cmd_outage(const CommonOpts& opts, const std::string& probes_text,
               const std::string& thresholds_text, const std::string& scenarios_text,
               const std::string& mode) {
    dsr::ScenarioConfig cfg = load_config(opts);
    const dsr::NetworkGeometry geom = dsr::resolved_geometry(cfg);

    std::vector<std::pair<double, double>> probes;
    if (probes_text.empty()) {
        for (const auto& [r, psi] : dsr::guard_border_probes(geom)) probes.emplace_back(r, psi);
    } else {
        for (const dsr::Vec2& p : parse_positions(probes_text)) probes.emplace_back(p.x, p.y);
    }
    const std::vector<double> thresholds =
        parse_range(thresholds_text.empty() ? "-10:20:1" : thresholds_text);
    if (thresholds.empty()) throw dsr::ConfigError("outage: threshold grid must not be empty");

    std::vector<dsr::Scenario> scenarios;
    if (!scenarios_text.empty()) {
        std::size_t start = 0;
        while (start < scenarios_text.size()) {
            std::size_t end = scenarios_text.find(',', start);
            if (end == std::string::npos) end = scenarios_text.size();
            const std::string name = scenarios_text.substr(start, end - start);
            if (name == "no_lte") scenarios.push_back(dsr::Scenario::no_lte);
            else if (name == "direct") scenarios.push_back(dsr::Scenario::direct_overlay);
            else if (name == "dsr") scenarios.push_back(dsr::Scenario::dsr);
            else if (name == "all") {
                scenarios = {dsr::Scenario::no_lte, dsr::Scenario::direct_overlay,
                             dsr::Scenario::dsr};
            } else
                throw dsr::ConfigError("outage: unknown scenario '" + name + "'");
            start = end + 1;
        }
    }

    const bool want_analysis = mode == "analysis" || mode == "both";
    const bool want_sim = mode == "sim" || mode == "both";

    ensure_out_dir(opts);
    dsr::ResultBundle bundle = make_bundle(cfg, opts);
    std::string csv = "probe_r,probe_psi,scenario,threshold_db,p_out,ci_lo,ci_hi\n";
    auto emit = [&](const std::string& probe_r, const std::string& probe_psi,
                    const std::string& scenario, double t_db, double p, double lo, double hi) {
        csv += dsr::csv_line({probe_r, probe_psi, scenario, format_double(t_db),
                              format_double(p), format_double(lo), format_double(hi)});
        nlohmann::json row = {{"scenario", scenario}, {"threshold_db", t_db},
                              {"p_out", p},           {"ci_lo", lo},
                              {"ci_hi", hi}};
        row["probe_r"] = probe_r.empty() ? nlohmann::json() : nlohmann::json(std::stod(probe_r));
        row["probe_psi"] =
            probe_psi.empty() ? nlohmann::json() : nlohmann::json(std::stod(probe_psi));
        bundle.add_row("outage", row);
    };

    if (want_analysis) {
        const dsr::AnalysisContext ctx = dsr::make_analysis_context(cfg);
        for (const auto& [r, psi] : probes) {
            for (double t_db : thresholds) {
                const double t = dsr::db_to_linear(t_db);
                const double p0 = dsr::gsm_outage(r, psi, t, false, ctx);
                const double p1 = dsr::gsm_outage(r, psi, t, true, ctx);
                emit(format_double(r), format_double(psi), "point_no_lte", t_db, p0, p0, p0);
                emit(format_double(r), format_double(psi), "point_with_lte", t_db, p1, p1, p1);
            }
        }
        for (dsr::Scenario sc : scenarios) {
            const char* name = sc == dsr::Scenario::no_lte
                                   ? "no_lte"
                                   : (sc == dsr::Scenario::direct_overlay ? "direct" : "dsr");
            for (double t_db : thresholds) {
                const double p = dsr::scenario_average_outage(sc, dsr::db_to_linear(t_db), ctx);
                emit("", "", name, t_db, p, p, p);
            }
        }
    }
    if (want_sim) {
        const dsr::SimConfig sim_cfg = dsr::make_sim_config(cfg);
        for (bool with_lte : {false, true}) {
            const dsr::OutageSimResult res =
                dsr::run_outage_sim(sim_cfg, probes, thresholds, with_lte);
            const std::string tag =
                with_lte ? "sim_point_with_lte" : "sim_point_no_lte";
            for (std::size_t p = 0; p < probes.size(); ++p) {
                for (std::size_t i = 0; i < thresholds.size(); ++i) {
                    const dsr::OutageCell& cell = res.cells[p][i];
                    emit(format_double(probes[p].first), format_double(probes[p].second), tag,
                         thresholds[i], cell.p, cell.ci_lo, cell.ci_hi);
                }
            }
        }
    }
    dsr::write_text_file(opts.out_dir + "/outage.csv", csv);
    dsr::write_bundle(opts.out_dir + "/bundle.json", bundle);
    std::printf("outage: wrote %zu probes x %zu thresholds to %s\n", probes.size(),
                thresholds.size(), (opts.out_dir + "/outage.csv").c_str());
    return kExitOk;
}

int cmd_sweep(const CommonOpts& opts, const std::string& d_text, const std::string& theta_text) {
    dsr::ScenarioConfig cfg = load_config(opts);
    const std::vector<double> d_grid = parse_range(d_text);
    const std::vector<double> theta_grid = parse_range(theta_text);
    if (d_grid.empty() || theta_grid.empty())
        throw dsr::ConfigError("sweep: grids must not be empty");

    ensure_out_dir(opts);
    dsr::ResultBundle bundle = make_bundle(cfg, opts);
    const dsr::SimConfig sim_cfg = dsr::make_sim_config(cfg);
    const dsr::SweepResult res =
        dsr::sweep_small_cell_position(sim_cfg, d_grid, theta_grid, cfg.ue_positions);

    std::string csv = "d,theta,mean_rate_bps,ci\n";
    for (const dsr::SweepRow& row : res.rows) {
        if (!row.valid_placement) {
            std::fprintf(stderr, "sweep: skipped (d=%g, theta=%g): guard region leaves sector\n",
                         row.d, row.theta);
            bundle.add_row("sweep_skipped", {{"d", row.d}, {"theta", row.theta}});
            continue;
        }
        csv += dsr::csv_line({format_double(row.d), format_double(row.theta),
                              format_double(row.mean_rate_bps), format_double(row.ci_halfwidth)});
        bundle.add_row("sweep", {{"d", row.d},
                                 {"theta", row.theta},
                                 {"mean_rate_bps", row.mean_rate_bps},
                                 {"ci", row.ci_halfwidth}});
    }
    if (res.n_skipped == static_cast<int>(res.rows.size()))
        std::fprintf(stderr, "sweep: warning: every grid position failed placement validation\n");
    dsr::write_text_file(opts.out_dir + "/sweep.csv", csv);
    dsr::write_bundle(opts.out_dir + "/bundle.json", bundle);
    return kExitOk;
}

int cmd_plan(const CommonOpts& opts) {
    dsr::ScenarioConfig cfg = load_config(opts);
    const dsr::NetworkGeometry geom = dsr::resolved_geometry(cfg);
    dsr::AnalysisContext ctx = dsr::make_analysis_context(cfg);
    dsr::CellIdPlan ids;
    ids.allowed_ids = cfg.cell_ids;
    const dsr::DeploymentPlan plan = dsr::build_deployment_plan(
        geom, ctx.radio, ctx, cfg.reserved_hz, ids, cfg.reservation_overrides);

    nlohmann::json doc;
    doc["config_hash"] = dsr::config_hash(cfg);
    doc["feasible"] = plan.feasible;
    doc["r_s_m"] = plan.r_s;
    doc["p_l_w"] = plan.p_l_w;
    doc["allowed_cell_ids"] = plan.cell_ids.allowed_ids;
    nlohmann::json carriers = nlohmann::json::array();
    for (const dsr::Carrier& c : plan.grid.carriers) {
        carriers.push_back({{"index", c.index},
                            {"center_hz", c.center_hz},
                            {"kind", c.kind == dsr::Carrier::Kind::traffic ? "traffic" : "control"},
                            {"sector", c.sector},
                            {"control_group", c.control_group}});
    }
    doc["carriers"] = carriers;
    nlohmann::json reservations = nlohmann::json::array();
    for (const dsr::SectorReservation& r : plan.reservations) {
        reservations.push_back({{"sector", r.sector},
                                {"first_carrier", r.first_carrier},
                                {"n_carriers", r.n_carriers},
                                {"prbs", r.prbs}});
    }
    doc["reservations"] = reservations;

    ensure_out_dir(opts);
    dsr::write_text_file(opts.out_dir + "/plan.json", doc.dump(2) + "\n");
    std::printf("plan: r_s=%.2f m, p_l=%.6f W, reserved PRBs per sector:", plan.r_s, plan.p_l_w);
    for (const auto& r : plan.reservations) std::printf(" %zu", r.prbs.size());
    std::printf("\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic spectrum refarming planner and evaluator"};
    app.require_subcommand(1);

    CommonOpts rate_opts, outage_opts, sweep_opts, plan_opts;
    std::string positions_text, rate_mode = "both", drop_log_path;
    CLI::App* rate = app.add_subcommand("rate", "LTE small-cell user rates");
    add_common(rate, rate_opts);
    rate->add_option("--ue-positions", positions_text, "Offsets from the small cell: 'x,y;x,y'");
    rate->add_option("--mode", rate_mode, "analysis | sim | both")
        ->check(CLI::IsMember({"analysis", "sim", "both"}));
    rate->add_option("--drop-log", drop_log_path, "Per-TTI debug log (CSV lines)");

    std::string probes_text, thresholds_text, scenarios_text, outage_mode = "analysis";
    CLI::App* outage = app.add_subcommand("outage", "GSM outage curves");
    add_common(outage, outage_opts);
    outage->add_option("--probes", probes_text,
                       "Probes 'r,psi;...' in the small-cell frame; default: guard-border set");
    outage->add_option("--thresholds", thresholds_text, "dB grid lo:hi:step (default -10:20:1)");
    outage->add_option("--scenarios", scenarios_text,
                       "Comma list of no_lte,direct,dsr (or 'all') for averaged curves");
    outage->add_option("--mode", outage_mode, "analysis | sim | both")
        ->check(CLI::IsMember({"analysis", "sim", "both"}));

    std::string d_text, theta_text;
    CLI::App* sweep = app.add_subcommand("sweep", "Small-cell placement throughput map");
    add_common(sweep, sweep_opts);
    sweep->add_option("--d-grid", d_text, "Distance grid lo:hi:step (m)")->required();
    sweep->add_option("--theta-grid", theta_text, "Azimuth grid lo:hi:step (rad)")->required();

    CLI::App* plan = app.add_subcommand("plan", "Carrier/PRB reservation and power plan");
    add_common(plan, plan_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (rate->parsed()) return cmd_rate(rate_opts, positions_text, rate_mode, drop_log_path);
        if (outage->parsed())
            return cmd_outage(outage_opts, probes_text, thresholds_text, scenarios_text,
                              outage_mode);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, d_text, theta_text);
        if (plan->parsed()) return cmd_plan(plan_opts);
    } catch (const dsr::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const dsr::InfeasiblePlanError& e) {
        std::fprintf(stderr, "infeasible plan: %s\n", e.what());
        return kExitInfeasible;
    } catch (const dsr::QuadratureError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitOk;
}
