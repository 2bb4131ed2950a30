#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsr/analysis.hpp"
#include "dsr/geometry.hpp"
#include "dsr/radio.hpp"

namespace dsr {

class InfeasiblePlanError : public std::runtime_error {
public:
    explicit InfeasiblePlanError(const std::string& what) : std::runtime_error(what) {}
};

struct Carrier {
    enum class Kind { traffic, control };
    int index = 0;
    double center_hz = 0.0;  ///< offset from the channel low edge
    Kind kind = Kind::traffic;
    int sector = -1;         ///< owning sector for traffic carriers
    int control_group = -1;  ///< 0..8 reuse group for control carriers
};

/// 10 MHz GSM channel: 48 x 200 kHz carriers between 200 kHz edge guards.
/// Traffic carriers form three contiguous 13-carrier sector blocks (1/3 reuse);
/// the trailing 9 carriers are the 3/9-reuse control block.
struct CarrierGrid {
    static constexpr double kChannelHz = 10e6;
    static constexpr double kCarrierHz = 200e3;
    static constexpr double kEdgeGuardHz = 200e3;
    static constexpr int kNumCarriers = 48;
    static constexpr int kTrafficPerSector = 13;
    static constexpr int kNumControl = 9;

    std::vector<Carrier> carriers;

    static double carrier_low_hz(int index) { return kEdgeGuardHz + kCarrierHz * index; }
    static double carrier_high_hz(int index) { return carrier_low_hz(index) + kCarrierHz; }
    /// [first, last] carrier indices of a sector's traffic block.
    static std::pair<int, int> traffic_block(int sector);
};

/// 50 x 180 kHz LTE PRBs centered in the same 10 MHz channel; PRBs 22..27
/// carry the sync/broadcast region and must never be punctured.
struct PrbGrid {
    static constexpr int kNumPrb = 50;
    static constexpr double kPrbHz = 180e3;
    static constexpr double kBaseOffsetHz = 500e3;
    static constexpr int kCentralFirst = 22;
    static constexpr int kCentralLast = 27;

    static double prb_low_hz(int index) { return kBaseOffsetHz + kPrbHz * index; }
    static double prb_high_hz(int index) { return prb_low_hz(index) + kPrbHz; }
    static bool is_central(int index) { return index >= kCentralFirst && index <= kCentralLast; }
};

struct CellIdPlan {
    std::vector<int> allowed_ids{0, 1, 2};
};

struct SectorReservation {
    int sector = 0;
    int first_carrier = 0;  ///< lowest reserved carrier index
    int n_carriers = 0;
    std::vector<int> prbs;  ///< minimal covering PRB set
};

struct DeploymentPlan {
    CarrierGrid grid;
    std::array<SectorReservation, 3> reservations;
    CellIdPlan cell_ids;
    double r_s = 0.0;
    double p_l_w = 0.0;
    bool feasible = false;
};

CarrierGrid build_carrier_grid();

/// Guard radius from the uniform-traffic proportionality rule
/// pi R_s^2 = reserved_fraction * sector_area.
double size_guard_region(double sector_area_m2, double reserved_fraction);

/// Reserved bandwidth matching an area fraction, rounded up to whole carriers.
double reserved_bandwidth_for_fraction(double fraction, double sector_bandwidth_hz);

/// Minimal PRB set covering `reserved_hz` of contiguous carriers inside the
/// sector's traffic block. The window defaults to the block edge farthest from
/// the channel center and is relocated within the block if its PRB cover would
/// touch the central sync region; throws InfeasiblePlanError when no placement
/// works. `first_carrier_override` pins the window start instead.
SectorReservation reserve_prbs(const CarrierGrid& grid, int sector, double reserved_hz,
                               std::optional<int> first_carrier_override = std::nullopt);

/// Largest small-cell transmit power (W) keeping the mean SINR degradation of
/// a GSM user at the guard border below max_degradation_db.
double calibrate_power(const NetworkGeometry& g, const RadioParams& rp,
                       const AnalysisContext& ctx, double max_degradation_db = 1.0);

DeploymentPlan build_deployment_plan(const NetworkGeometry& g, const RadioParams& rp,
                                     const AnalysisContext& ctx, double reserved_hz,
                                     const CellIdPlan& cell_ids,
                                     const std::array<std::optional<int>, 3>& overrides = {});

}  // namespace dsr
