#include "dsr/spectrum_plan.hpp"

#include <algorithm>
#include <cmath>

#include "dsr/angles.hpp"

namespace dsr {

std::pair<int, int> CarrierGrid::traffic_block(int sector) {
    if (sector < 0 || sector > 2) throw std::invalid_argument("sector index must be 0..2");
    const int first = sector * kTrafficPerSector;
    return {first, first + kTrafficPerSector - 1};
}

CarrierGrid build_carrier_grid() {
    CarrierGrid grid;
    grid.carriers.reserve(CarrierGrid::kNumCarriers);
    for (int idx = 0; idx < CarrierGrid::kNumCarriers; ++idx) {
        Carrier c;
        c.index = idx;
        c.center_hz = CarrierGrid::carrier_low_hz(idx) + CarrierGrid::kCarrierHz / 2.0;
        if (idx < 3 * CarrierGrid::kTrafficPerSector) {
            c.kind = Carrier::Kind::traffic;
            c.sector = idx / CarrierGrid::kTrafficPerSector;
        } else {
            c.kind = Carrier::Kind::control;
            c.control_group = idx - 3 * CarrierGrid::kTrafficPerSector;
        }
        grid.carriers.push_back(c);
    }
    return grid;
}

double size_guard_region(double sector_area_m2, double reserved_fraction) {
    if (!(sector_area_m2 > 0.0)) throw std::invalid_argument("sector area must be > 0");
    if (reserved_fraction < 0.0 || reserved_fraction > 1.0)
        throw std::invalid_argument("reserved fraction must lie in [0, 1]");
    return std::sqrt(reserved_fraction * sector_area_m2 / kPi);
}

double reserved_bandwidth_for_fraction(double fraction, double sector_bandwidth_hz) {
    const double raw = fraction * sector_bandwidth_hz;
    return std::ceil(raw / CarrierGrid::kCarrierHz) * CarrierGrid::kCarrierHz;
}

namespace {

/// PRBs whose span overlaps the open interval (lo, hi), clipped to the LTE
/// occupied band (the channel-edge guards need no puncturing).
std::vector<int> covering_prbs(double lo, double hi) {
    std::vector<int> out;
    for (int p = 0; p < PrbGrid::kNumPrb; ++p) {
        if (PrbGrid::prb_low_hz(p) < hi && PrbGrid::prb_high_hz(p) > lo) out.push_back(p);
    }
    return out;
}

bool touches_central(const std::vector<int>& prbs) {
    return std::any_of(prbs.begin(), prbs.end(), PrbGrid::is_central);
}

}  // namespace

SectorReservation reserve_prbs(const CarrierGrid& grid, int sector, double reserved_hz,
                               std::optional<int> first_carrier_override) {
    (void)grid;
    SectorReservation res;
    res.sector = sector;
    if (reserved_hz <= 0.0) return res;

    const int n = static_cast<int>(std::ceil(reserved_hz / CarrierGrid::kCarrierHz));
    const auto [block_lo, block_hi] = CarrierGrid::traffic_block(sector);
    if (n > block_hi - block_lo + 1)
        throw InfeasiblePlanError("sector " + std::to_string(sector) + ": reservation of " +
                                  std::to_string(n) + " carriers exceeds the 13-carrier block");
    res.n_carriers = n;

    auto try_window = [&](int first) -> std::optional<SectorReservation> {
        const double lo = CarrierGrid::carrier_low_hz(first);
        const double hi = CarrierGrid::carrier_high_hz(first + n - 1);
        std::vector<int> prbs = covering_prbs(lo, hi);
        if (touches_central(prbs)) return std::nullopt;
        SectorReservation r = res;
        r.first_carrier = first;
        r.prbs = std::move(prbs);
        return r;
    };

    if (first_carrier_override) {
        const int first = *first_carrier_override;
        if (first < block_lo || first + n - 1 > block_hi)
            throw InfeasiblePlanError("sector " + std::to_string(sector) +
                                      ": override window leaves the sector traffic block");
        if (auto r = try_window(first)) return *r;
        throw InfeasiblePlanError("sector " + std::to_string(sector) +
                                  ": override window would puncture the central sync PRBs");
    }

    // Candidate starts ordered by window-center distance from the channel
    // center, farthest first.
    std::vector<int> starts;
    for (int first = block_lo; first + n - 1 <= block_hi; ++first) starts.push_back(first);
    const double channel_center = CarrierGrid::kChannelHz / 2.0;
    std::stable_sort(starts.begin(), starts.end(), [&](int a, int b) {
        auto dist = [&](int first) {
            const double mid = 0.5 * (CarrierGrid::carrier_low_hz(first) +
                                      CarrierGrid::carrier_high_hz(first + n - 1));
            return std::abs(mid - channel_center);
        };
        return dist(a) > dist(b);
    });
    for (int first : starts) {
        if (auto r = try_window(first)) return *r;
    }
    throw InfeasiblePlanError("sector " + std::to_string(sector) +
                              ": no in-block carrier window avoids the central sync PRBs");
}

double calibrate_power(const NetworkGeometry& g, const RadioParams& rp,
                       const AnalysisContext& ctx, double max_degradation_db) {
    if (!(g.r_s > 0.0)) throw std::invalid_argument("calibrate_power: r_s must be > 0");
    if (max_degradation_db < 0.0)
        throw std::invalid_argument("calibrate_power: degradation budget must be >= 0");
    const double i0 = mean_cochannel_interference(ctx);
    const double sigma2 = noise_power(rp, ctx.gsm_channel_bw_hz);
    const double p_l_hat = (std::pow(10.0, max_degradation_db / 10.0) - 1.0) * (i0 + sigma2) *
                           std::pow(g.r_s, rp.alpha);
    return p_l_hat / rp.effective_l0();
}

DeploymentPlan build_deployment_plan(const NetworkGeometry& g, const RadioParams& rp,
                                     const AnalysisContext& ctx, double reserved_hz,
                                     const CellIdPlan& cell_ids,
                                     const std::array<std::optional<int>, 3>& overrides) {
    if (cell_ids.allowed_ids.empty())
        throw InfeasiblePlanError("cell-ID plan must allow at least one physical cell ID");
    DeploymentPlan plan;
    plan.grid = build_carrier_grid();
    for (int s = 0; s < 3; ++s)
        plan.reservations[s] = reserve_prbs(plan.grid, s, reserved_hz, overrides[s]);
    plan.cell_ids = cell_ids;
    plan.r_s = g.r_s;
    plan.p_l_w = rp.p_l_w > 0.0 ? rp.p_l_w : calibrate_power(g, rp, ctx);
    plan.feasible = true;
    return plan;
}

}  // namespace dsr
