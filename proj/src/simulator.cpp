#include "dsr/simulator.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "dsr/angles.hpp"
#include "dsr/rng.hpp"

namespace dsr {

namespace {

// Purpose keys for per-drop substreams. Keeping link types on separate streams
// makes "p_l = 0" and "with_lte = false" draw-for-draw identical.
enum StreamPurpose : std::uint64_t {
    kStreamLteFades = 0,
    kStreamGsmInterfererFades = 1,
    kStreamBsPlacement = 2,
    kStreamDesiredGsmFade = 3,
    kStreamLteInterfererFade = 4,
};

struct MeanStats {
    double mean = 0.0;
    double ci_halfwidth = 0.0;
};

MeanStats summarize(const std::vector<double>& per_drop) {
    MeanStats out;
    const std::size_t n = per_drop.size();
    if (n == 0) return out;
    double sum = 0.0;
    for (double v : per_drop) sum += v;
    out.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : per_drop) ss += (v - out.mean) * (v - out.mean);
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        out.ci_halfwidth = 1.96 * sd / std::sqrt(static_cast<double>(n));
    }
    return out;
}

OutageCell wilson(std::uint64_t failures, std::uint64_t trials) {
    OutageCell cell;
    cell.trials = trials;
    cell.failures = failures;
    if (trials == 0) return cell;
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    cell.p = p;
    cell.ci_lo = std::max(0.0, center - half);
    cell.ci_hi = std::min(1.0, center + half);
    return cell;
}

void parallel_drops(int n_drops, int workers, const std::function<void(int)>& body) {
    if (workers <= 1) {
        for (int d = 0; d < n_drops; ++d) body(d);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int d = next.fetch_add(1); d < n_drops; d = next.fetch_add(1)) body(d);
        });
    }
    for (auto& t : pool) t.join();
}

struct Site {
    Vec2 position;
    bool cochannel = false;  ///< shares the typical cell's control-carrier group
};

std::vector<Site> grid_sites(const SimConfig& cfg) {
    const HexGrid grid = make_hex_grid(cfg.geometry, cfg.grid_rows, cfg.grid_cols);
    std::vector<Site> sites;
    sites.reserve(grid.bs_positions.size());
    for (std::size_t k = 0; k < grid.bs_positions.size(); ++k) {
        sites.push_back({grid.bs_positions[k],
                         grid.cluster_ids[k] == grid.typical_cluster() &&
                             k != grid.typical_cell_index});
    }
    return sites;
}

double ppp_radius(const SimConfig& cfg) {
    return cfg.ppp_truncation_radius_m > 0.0 ? cfg.ppp_truncation_radius_m
                                             : 30.0 * cfg.geometry.r_m;
}

double sector_gain_towards(const SimConfig& cfg, const Vec2& site, const Vec2& target,
                           double boresight) {
    const Vec2 dir = target - site;
    return antenna_gain(cfg.pattern, angle_diff(dir.azimuth(), boresight));
}

}  // namespace

void SimConfig::validate() const {
    geometry.validate();
    radio.validate();
    if (grid_rows < 1 || grid_cols < 1) throw std::invalid_argument("sim grid dims must be >= 1");
    if (n_drops < 1) throw std::invalid_argument("sim.n_drops must be >= 1");
    if (n_tti_per_drop < 1) throw std::invalid_argument("sim.n_tti_per_drop must be >= 1");
    if (!(pf_window >= 1.0)) throw std::invalid_argument("sim.pf_window must be >= 1");
}

int resolve_worker_count(const SimConfig& cfg) {
    if (cfg.n_workers > 0) return cfg.n_workers;
    if (const char* env = std::getenv("DSR_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

RateSimResult run_rate_sim(const SimConfig& cfg, const std::vector<Vec2>& ue_offsets,
                           const DropLogSink& sink) {
    cfg.validate();
    if (ue_offsets.empty()) throw std::invalid_argument("run_rate_sim: UE list must not be empty");
    const std::size_t n_ue = ue_offsets.size();
    const int n_bands = static_cast<int>(cfg.bandwidths_hz.size());
    const Vec2 sc = cfg.geometry.small_cell_position();
    const int serving_sector = serving_sector_index(cfg.geometry.theta);

    std::vector<double> r_ue(n_ue);
    std::vector<Vec2> ue_abs(n_ue);
    for (std::size_t u = 0; u < n_ue; ++u) {
        r_ue[u] = ue_offsets[u].norm();
        if (!(r_ue[u] > 0.0) || r_ue[u] > cfg.geometry.r_c + 1e-9)
            throw std::invalid_argument("run_rate_sim: UE offset " + std::to_string(u) +
                                        " must lie in (0, r_c]");
        ue_abs[u] = sc + ue_offsets[u];
    }

    const double pg = cfg.radio.p_g_hat();
    const double pl = cfg.radio.p_l_hat();
    const double alpha = cfg.radio.alpha;
    const double eta = cfg.radio.eta;
    std::array<double, 3> sigma2{};
    std::array<double, 3> boresight{};
    for (int b = 0; b < n_bands; ++b) {
        sigma2[b] = noise_power(cfg.radio, cfg.bandwidths_hz[b]);
        boresight[b] = sector_boresight((serving_sector + b) % 3);
    }
    std::vector<double> s_coef(n_ue);
    for (std::size_t u = 0; u < n_ue; ++u) s_coef[u] = pl * std::pow(r_ue[u], -alpha);

    // Hex placement: one fixed field for every drop (all sites interfere on
    // every band through the matching sector antenna). PPP placement redraws
    // the field per drop with the per-band exclusion balls of the analysis.
    std::vector<Site> fixed_sites;
    GuardRadii exclusion{};
    if (cfg.placement == BsPlacement::hex_grid) {
        fixed_sites = grid_sites(cfg);
    } else {
        exclusion = band_guard_radii(cfg.geometry);
    }
    const std::array<double, 3> excl_r{exclusion.r1, exclusion.r2, exclusion.r3};
    const double lambda_bs = 2.0 / (3.0 * std::sqrt(3.0) * cfg.geometry.r_m * cfg.geometry.r_m);
    const double field_radius = ppp_radius(cfg);

    struct DropOut {
        std::vector<double> ue_rate;
        double aggregate = 0.0;
        std::vector<DropLogRow> log;
    };
    std::vector<DropOut> drops(static_cast<std::size_t>(cfg.n_drops));

    auto run_drop = [&](int d) {
        DropOut& out = drops[static_cast<std::size_t>(d)];
        out.ue_rate.assign(n_ue, 0.0);

        const std::vector<Site>* sites = &fixed_sites;
        std::vector<Site> drop_sites;
        if (cfg.placement == BsPlacement::ppp) {
            Rng place = Rng::stream(cfg.seed, static_cast<std::uint64_t>(d), kStreamBsPlacement);
            const double area = kPi * field_radius * field_radius;
            const std::uint64_t n = place.poisson(lambda_bs * area);
            drop_sites.reserve(n);
            for (std::uint64_t k = 0; k < n; ++k) {
                const double rr = field_radius * std::sqrt(place.uniform01());
                const double az = place.uniform(0.0, kTwoPi);
                drop_sites.push_back({sc + Vec2{rr * std::cos(az), rr * std::sin(az)}, false});
            }
            sites = &drop_sites;
        }
        const std::size_t n_sites = sites->size();

        // Deterministic interference coefficients per (site, band, ue); the
        // azimuth and path-loss terms are shared across bands.
        std::vector<double> coef(n_sites * n_bands * n_ue, 0.0);
        for (std::size_t x = 0; x < n_sites; ++x) {
            const Vec2& site = (*sites)[x].position;
            for (std::size_t u = 0; u < n_ue; ++u) {
                const Vec2 dir = ue_abs[u] - site;
                const double dist = dir.norm();
                if (dist <= 0.0) continue;
                const double az = dir.azimuth();
                const double path = pg * std::pow(dist, -alpha);
                for (int b = 0; b < n_bands; ++b) {
                    if (cfg.placement == BsPlacement::ppp && dist <= excl_r[b]) continue;
                    coef[(x * n_bands + b) * n_ue + u] =
                        path * antenna_gain(cfg.pattern, angle_diff(az, boresight[b]));
                }
            }
        }

        Rng h_rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(d), kStreamLteFades);
        Rng f_rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(d), kStreamGsmInterfererFades);

        std::vector<double> avg(n_bands * n_ue, 1.0);  // PF exponential averages
        std::vector<double> interf(n_bands * n_ue);
        std::vector<double> inst(n_bands * n_ue);
        std::vector<double> sinr_store(n_bands * n_ue);

        for (int t = 0; t < cfg.n_tti_per_drop; ++t) {
            std::fill(interf.begin(), interf.end(), 0.0);
            for (std::size_t x = 0; x < n_sites; ++x) {
                for (int b = 0; b < n_bands; ++b) {
                    for (std::size_t u = 0; u < n_ue; ++u) {
                        const double c = coef[(x * n_bands + b) * n_ue + u];
                        const double fade = draw_fade(cfg.fading, f_rng);
                        if (c > 0.0) interf[b * n_ue + u] += c * fade;
                    }
                }
            }
            for (int b = 0; b < n_bands; ++b) {
                for (std::size_t u = 0; u < n_ue; ++u) {
                    const double h = draw_fade(cfg.fading, h_rng);
                    const double sinr = s_coef[u] * h / (interf[b * n_ue + u] + sigma2[b]);
                    sinr_store[b * n_ue + u] = sinr;
                    inst[b * n_ue + u] =
                        cfg.bandwidths_hz[b] * std::log2(1.0 + sinr / eta);
                }
            }
            for (int b = 0; b < n_bands; ++b) {
                std::size_t chosen = 0;
                if (cfg.scheduler == Scheduler::round_robin) {
                    chosen = static_cast<std::size_t>(t) % n_ue;
                } else {
                    double best = -1.0;
                    for (std::size_t u = 0; u < n_ue; ++u) {
                        const double metric = inst[b * n_ue + u] / avg[b * n_ue + u];
                        if (metric > best) {
                            best = metric;
                            chosen = u;
                        }
                    }
                }
                for (std::size_t u = 0; u < n_ue; ++u) {
                    const bool sched = (u == chosen);
                    if (sched) out.ue_rate[u] += inst[b * n_ue + u];
                    if (cfg.scheduler == Scheduler::proportional_fair) {
                        const double sample = sched ? inst[b * n_ue + u] : 0.0;
                        avg[b * n_ue + u] += (sample - avg[b * n_ue + u]) / cfg.pf_window;
                    }
                    if (sink) {
                        out.log.push_back(
                            {d, t, static_cast<int>(u), b,
                             linear_to_db(std::max(sinr_store[b * n_ue + u], 1e-300)), sched});
                    }
                }
            }
        }
        for (std::size_t u = 0; u < n_ue; ++u)
            out.ue_rate[u] /= static_cast<double>(cfg.n_tti_per_drop);
        for (double v : out.ue_rate) out.aggregate += v;
    };

    parallel_drops(cfg.n_drops, resolve_worker_count(cfg), run_drop);

    RateSimResult result;
    result.n_drops = cfg.n_drops;
    result.per_ue.resize(n_ue);
    std::vector<double> series(static_cast<std::size_t>(cfg.n_drops));
    for (std::size_t u = 0; u < n_ue; ++u) {
        for (int d = 0; d < cfg.n_drops; ++d)
            series[static_cast<std::size_t>(d)] = drops[static_cast<std::size_t>(d)].ue_rate[u];
        const MeanStats st = summarize(series);
        result.per_ue[u] = {st.mean, st.ci_halfwidth};
    }
    for (int d = 0; d < cfg.n_drops; ++d)
        series[static_cast<std::size_t>(d)] = drops[static_cast<std::size_t>(d)].aggregate;
    const MeanStats agg = summarize(series);
    result.aggregate = {agg.mean, agg.ci_halfwidth};

    if (sink) {
        for (const DropOut& d : drops)
            for (const DropLogRow& row : d.log) sink(row);
    }
    return result;
}

OutageSimResult run_outage_sim(const SimConfig& cfg,
                               const std::vector<std::pair<double, double>>& probes,
                               const std::vector<double>& thresholds_db, bool with_lte) {
    cfg.validate();
    if (probes.empty()) throw std::invalid_argument("run_outage_sim: probe list must not be empty");
    const Vec2 sc = cfg.geometry.small_cell_position();
    const int serving_sector = serving_sector_index(cfg.geometry.theta);
    const double bore = sector_boresight(serving_sector);
    const double pg = cfg.radio.p_g_hat();
    const double pl = cfg.radio.p_l_hat();
    const double alpha = cfg.radio.alpha;
    const double sigma2 = noise_power(cfg.radio, cfg.gsm_channel_bw_hz);
    const double lambda_cc = 2.0 / (9.0 * std::sqrt(3.0) * cfg.geometry.r_m * cfg.geometry.r_m);
    const double r0 = gsm_cochannel_radius(cfg.geometry, cfg.r0_variant);
    const double field_radius = ppp_radius(cfg);

    std::vector<double> thresholds_lin(thresholds_db.size());
    for (std::size_t i = 0; i < thresholds_db.size(); ++i)
        thresholds_lin[i] = db_to_linear(thresholds_db[i]);

    std::vector<Site> sites;
    if (cfg.placement == BsPlacement::hex_grid) sites = grid_sites(cfg);

    struct ProbeSetup {
        Vec2 user;
        double desired_coef = 0.0;
        double lte_coef = 0.0;  ///< negative marks "always in outage" (r = 0)
        std::vector<double> cochannel_coef;
    };
    std::vector<ProbeSetup> setups(probes.size());
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const auto [r, psi] = probes[p];
        if (r < 0.0) throw std::invalid_argument("run_outage_sim: probe r must be >= 0");
        ProbeSetup& s = setups[p];
        s.user = sc + Vec2{r * std::cos(cfg.geometry.theta + psi),
                           r * std::sin(cfg.geometry.theta + psi)};
        const double d = s.user.norm();
        if (!(d > 0.0))
            throw std::invalid_argument("run_outage_sim: probe coincides with the serving BS");
        s.desired_coef =
            pg * antenna_gain(cfg.pattern, angle_diff(s.user.azimuth(), bore)) * std::pow(d, -alpha);
        if (with_lte && pl > 0.0) s.lte_coef = r > 0.0 ? pl * std::pow(r, -alpha) : -1.0;
        if (cfg.placement == BsPlacement::hex_grid) {
            for (const Site& site : sites) {
                if (!site.cochannel) continue;
                const double dist = (s.user - site.position).norm();
                s.cochannel_coef.push_back(
                    pg * sector_gain_towards(cfg, site.position, s.user, bore) *
                    std::pow(dist, -alpha));
            }
        }
    }

    struct DropOut {
        std::vector<std::uint64_t> failures;  // [probe * nT + t]
    };
    std::vector<DropOut> drops(static_cast<std::size_t>(cfg.n_drops));
    const std::size_t n_thresh = thresholds_db.size();

    auto run_drop = [&](int d) {
        DropOut& out = drops[static_cast<std::size_t>(d)];
        out.failures.assign(probes.size() * n_thresh, 0);
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const ProbeSetup& s = setups[p];
            const std::uint64_t base = static_cast<std::uint64_t>(p) * 8;
            Rng g_rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(d),
                                    base + kStreamDesiredGsmFade);
            Rng f_rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(d),
                                    base + kStreamGsmInterfererFades);
            Rng l_rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(d),
                                    base + kStreamLteInterfererFade);
            Rng place = Rng::stream(cfg.seed, static_cast<std::uint64_t>(d),
                                    base + kStreamBsPlacement);

            std::vector<double> ppp_coef;
            const std::vector<double>* cc = &s.cochannel_coef;
            if (cfg.placement == BsPlacement::ppp) {
                // Co-channel field: PPP of density lambda/3 on the annulus
                // [r0, field_radius] around the user, as in the analysis.
                const double area = kPi * (field_radius * field_radius - r0 * r0);
                if (area > 0.0) {
                    const std::uint64_t n = place.poisson(lambda_cc * area);
                    ppp_coef.reserve(n);
                    for (std::uint64_t k = 0; k < n; ++k) {
                        const double rr = std::sqrt(r0 * r0 + place.uniform01() *
                                                                  (field_radius * field_radius -
                                                                   r0 * r0));
                        const double az = place.uniform(0.0, kTwoPi);
                        const Vec2 site = s.user + Vec2{rr * std::cos(az), rr * std::sin(az)};
                        ppp_coef.push_back(pg *
                                           sector_gain_towards(cfg, site, s.user, bore) *
                                           std::pow(rr, -alpha));
                    }
                }
                cc = &ppp_coef;
            }

            for (int t = 0; t < cfg.n_tti_per_drop; ++t) {
                double interference = 0.0;
                for (double c : *cc) interference += c * draw_fade(cfg.fading, f_rng);
                if (s.lte_coef > 0.0) interference += s.lte_coef * draw_fade(cfg.fading, l_rng);
                const double signal = s.desired_coef * draw_fade(cfg.fading, g_rng);
                const double sinr =
                    (s.lte_coef < 0.0) ? 0.0 : signal / (interference + sigma2);
                for (std::size_t i = 0; i < n_thresh; ++i)
                    if (sinr < thresholds_lin[i]) ++out.failures[p * n_thresh + i];
            }
        }
    };

    parallel_drops(cfg.n_drops, resolve_worker_count(cfg), run_drop);

    OutageSimResult result;
    result.probes = probes;
    result.thresholds_db = thresholds_db;
    result.cells.resize(probes.size());
    const std::uint64_t trials =
        static_cast<std::uint64_t>(cfg.n_drops) * static_cast<std::uint64_t>(cfg.n_tti_per_drop);
    for (std::size_t p = 0; p < probes.size(); ++p) {
        result.cells[p].resize(n_thresh);
        for (std::size_t i = 0; i < n_thresh; ++i) {
            std::uint64_t failures = 0;
            for (const DropOut& d : drops) failures += d.failures[p * n_thresh + i];
            result.cells[p][i] = wilson(failures, trials);
        }
    }
    return result;
}

SweepResult sweep_small_cell_position(const SimConfig& cfg, const std::vector<double>& d_values,
                                      const std::vector<double>& theta_values,
                                      const std::vector<Vec2>& ue_offsets) {
    if (d_values.empty() || theta_values.empty())
        throw std::invalid_argument("sweep: position grids must not be empty");
    SweepResult out;
    for (double d : d_values) {
        for (double theta : theta_values) {
            SimConfig local = cfg;
            local.geometry.d = d;
            local.geometry.theta = theta;
            SweepRow row;
            row.d = d;
            row.theta = theta;
            row.valid_placement = validate_placement(local.geometry);
            if (!row.valid_placement) {
                ++out.n_skipped;
                out.rows.push_back(row);
                continue;
            }
            const RateSimResult res = run_rate_sim(local, ue_offsets);
            row.mean_rate_bps = res.aggregate.mean_rate_bps;
            row.ci_halfwidth = res.aggregate.ci_halfwidth;
            out.rows.push_back(row);
        }
    }
    return out;
}

}  // namespace dsr
