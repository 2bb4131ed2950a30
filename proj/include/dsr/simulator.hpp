#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dsr/geometry.hpp"
#include "dsr/radio.hpp"

namespace dsr {

enum class Scheduler { round_robin, proportional_fair };
enum class BsPlacement { hex_grid, ppp };

struct SimConfig {
    NetworkGeometry geometry;
    int grid_rows = 6;
    int grid_cols = 6;
    RadioParams radio;
    AntennaPattern pattern;
    FadingModel fading;
    Scheduler scheduler = Scheduler::proportional_fair;
    BsPlacement placement = BsPlacement::hex_grid;
    CochannelRadiusVariant r0_variant = CochannelRadiusVariant::theorem;
    std::array<double, 3> bandwidths_hz{2e6, 3e6, 3e6};
    double gsm_channel_bw_hz = 200e3;
    int n_drops = 200;
    int n_tti_per_drop = 500;
    double pf_window = 100.0;
    std::uint64_t seed = 12345;
    /// 0 picks the DSR_WORKERS env var, then hardware concurrency.
    int n_workers = 0;
    /// 0 defaults to 30 * r_m (PPP placement only).
    double ppp_truncation_radius_m = 0.0;

    void validate() const;
};

struct DropLogRow {
    int drop = 0;
    int tti = 0;
    int ue = 0;
    int band = 0;
    double sinr_db = 0.0;
    bool scheduled = false;
};
using DropLogSink = std::function<void(const DropLogRow&)>;

struct UeRateStats {
    double mean_rate_bps = 0.0;
    double ci_halfwidth = 0.0;
};

struct RateSimResult {
    std::vector<UeRateStats> per_ue;
    UeRateStats aggregate;  ///< cell throughput (sum over UEs)
    int n_drops = 0;
};

struct OutageCell {
    double p = 0.0;
    double ci_lo = 0.0;  ///< Wilson 95% interval
    double ci_hi = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
};

struct OutageSimResult {
    std::vector<std::pair<double, double>> probes;  ///< (r, psi) in the small-cell frame
    std::vector<double> thresholds_db;
    std::vector<std::vector<OutageCell>> cells;  ///< [probe][threshold]
};

struct SweepRow {
    double d = 0.0;
    double theta = 0.0;
    bool valid_placement = false;
    double mean_rate_bps = 0.0;
    double ci_halfwidth = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    int n_skipped = 0;
};

int resolve_worker_count(const SimConfig& cfg);

/// Monte Carlo downlink rates for UEs at the given Cartesian offsets from the
/// small cell. Drops redraw fading (and the BS field in PPP placement); the
/// result is bit-identical for a fixed config regardless of worker count.
RateSimResult run_rate_sim(const SimConfig& cfg, const std::vector<Vec2>& ue_offsets,
                           const DropLogSink& sink = nullptr);

/// Empirical GSM control-channel outage at the given (r, psi) probes for each
/// threshold (dB). with_lte adds the nearest-small-cell interference term.
OutageSimResult run_outage_sim(const SimConfig& cfg,
                               const std::vector<std::pair<double, double>>& probes,
                               const std::vector<double>& thresholds_db, bool with_lte);

/// Mean cell throughput over a (d, theta) placement grid; positions whose guard
/// region leaves the serving sector are flagged and skipped.
SweepResult sweep_small_cell_position(const SimConfig& cfg, const std::vector<double>& d_values,
                                      const std::vector<double>& theta_values,
                                      const std::vector<Vec2>& ue_offsets);

}  // namespace dsr
