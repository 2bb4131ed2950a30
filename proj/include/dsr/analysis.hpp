#pragma once

#include <array>
#include <limits>
#include <vector>

#include "dsr/geometry.hpp"
#include "dsr/quadrature.hpp"
#include "dsr/radio.hpp"

namespace dsr {

struct BandSpec {
    double bandwidth_hz = 0.0;
    double guard_radius_m = 0.0;   ///< interferer exclusion radius for this band
    double sector_offset_rad = 0.0;
};

struct BandPlanAnalysis {
    std::vector<BandSpec> bands;
    double lambda_bs = 0.0;  ///< macro BS density (m^-2)
    double lambda_ue = 0.0;  ///< UE density (m^-2); <= 0 means one user per cell
};

struct OutageCurve {
    std::vector<double> thresholds_db;
    std::vector<std::vector<double>> probabilities;  ///< [scenario][threshold]
};

struct AnalysisContext {
    NetworkGeometry geometry;
    RadioParams radio;
    AntennaPattern pattern;
    FadingModel interferer_fading;
    BandPlanAnalysis plan;
    QuadratureSpec inner_quad{1e-6, 1e-14, 4000, 1e-10};
    QuadratureSpec outer_quad{1e-4, 1e-12, 2000, 1e-10};
    CochannelRadiusVariant r0_variant = CochannelRadiusVariant::theorem;
    double gsm_channel_bw_hz = 200e3;
    /// Interference-field truncation radius; infinity in production, finite to
    /// match a truncated Monte Carlo field exactly.
    double outer_radius_m = std::numeric_limits<double>::infinity();
};

enum class Scenario { no_lte, direct_overlay, dsr };

/// Bands B1..B3 with guard radii derived from the geometry, plus the PPP
/// density lambda = 2/(3*sqrt(3)*Rm^2).
BandPlanAnalysis band_plan_from_geometry(const NetworkGeometry& g,
                                         const std::array<double, 3>& bandwidths_hz,
                                         double lambda_ue);

/// Expected number of UEs in the small cell, floored at one.
double expected_ue_count(const AnalysisContext& ctx);

/// Laplace transform of the sector-weighted PPP interference outside radius r_i:
///   L(s) = exp(-lambda * int_phi int_{r_i}^{outer} v (1 - E_F exp(-s Pg_hat F G(phi) v^-alpha)) dv dphi).
/// Throws QuadratureError if the tolerance cannot be met.
double laplace_interference(double s, double r_i, double lambda, const AntennaPattern& pattern,
                            const FadingModel& fading, const RadioParams& rp,
                            const QuadratureSpec& spec,
                            double outer_radius = std::numeric_limits<double>::infinity());

/// P(SINR_i(r) > x) for the LTE UE at link length r on band i.
double lte_band_sinr_ccdf(double r, std::size_t band, double x, const AnalysisContext& ctx);

/// Mean LTE UE rate (bit/s) at link length r under round-robin sharing.
double lte_user_rate(double r, const AnalysisContext& ctx);

/// Outage probability of the GSM user at (r, psi) w.r.t. the small cell.
/// with_lte=false drops the small-cell interference factor.
double gsm_outage(double r, double psi, double T, bool with_lte, const AnalysisContext& ctx);

/// Disk-averaged outage over radius r_s + delta_r_s for the three deployment
/// scenarios; the DSR scenario is interference-free inside the guard region.
double scenario_average_outage(Scenario scenario, double T, const AnalysisContext& ctx);

/// Mean co-channel GSM interference power at the guard-region border (fading
/// averaged out); drives the small-cell power calibration.
double mean_cochannel_interference(const AnalysisContext& ctx);

namespace detail {
/// Inner radial integral int_{r_lo}^{r_hi} v (1 - L_F(a v^-alpha)) dv.
/// The alpha = 3 Rayleigh case reduces to an elementary antiderivative that
/// the generic quadrature path must reproduce; force_quadrature pins the
/// generic path for that cross-check.
double interferer_field_integral(double a, double r_lo, double r_hi, double alpha,
                                 const FadingModel& fading, const QuadratureSpec& spec,
                                 bool force_quadrature = false);
}  // namespace detail

}  // namespace dsr
