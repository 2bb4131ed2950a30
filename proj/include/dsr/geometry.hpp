#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace dsr {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const;
    double azimuth() const;  ///< atan2(y, x)
};

/// Two-tier layout: macro hexagon of side r_m with a small cell at polar
/// position (d, theta) w.r.t. its serving BS, theta measured from the serving
/// sector boresight.
struct NetworkGeometry {
    double r_m = 1000.0;     ///< macro hex side length (m)
    double d = 500.0;        ///< small-cell distance from the serving BS (m)
    double theta = 0.0;      ///< small-cell azimuth (rad), in (-pi, pi]
    double r_c = 50.0;       ///< small-cell coverage radius (m)
    double r_s = 262.5187839521660;  ///< guard-region radius (m)
    double delta_r_s = 100.0;        ///< evaluation annulus width beyond the guard (m)

    void validate() const;  ///< throws std::invalid_argument on violated invariants
    Vec2 small_cell_position() const;
};

struct GuardRadii {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double r0 = 0.0;  ///< GSM co-channel exclusion radius; filled by gsm_cochannel_radius
};

struct LinkGeometry {
    double d = 0.0;     ///< GSM user's distance to its serving macro BS (m)
    double beta = 0.0;  ///< user's azimuth w.r.t. the serving sector boresight (rad)
};

/// Per-band interferer exclusion radii:
///   R1 = D - Rc,   R2 = R3 = sqrt((3/2 Rm - D + Rc)^2 + 3/4 Rm^2).
/// Rejects D <= Rc.
GuardRadii band_guard_radii(const NetworkGeometry& g);

/// Distance and boresight-relative azimuth of a GSM user at offset (r, psi)
/// from the small cell; psi is measured from the outward radial direction.
LinkGeometry gsm_link_geometry(const NetworkGeometry& g, double r, double psi);

enum class CochannelRadiusVariant { theorem, proof };

/// Exclusion radius of the co-channel GSM interferer field. The two published
/// expressions disagree; both are kept and `theorem` is the default. The proof
/// variant depends on the user azimuth beta (defaults to theta, the user at the
/// small cell).
double gsm_cochannel_radius(const NetworkGeometry& g,
                            CochannelRadiusVariant variant = CochannelRadiusVariant::theorem,
                            std::optional<double> beta = std::nullopt);

/// True iff the guard disk of radius r_s at (d, theta) lies inside the serving
/// hexagon and inside the serving 120-degree sector wedge.
bool validate_placement(const NetworkGeometry& g);

/// True iff p lies in the flat-topped hexagon of circumradius r_m centered at c.
bool point_in_hexagon(const Vec2& p, const Vec2& c, double r_m);

/// Boresight azimuth of sector i (i = 0, 1, 2): 2*pi/3 * i.
double sector_boresight(int sector);

/// Sector whose wedge contains the given azimuth (boresight nearest in angle).
int serving_sector_index(double azimuth);

/// Regular hexagonal layout of rows x cols sites, cell side r_m, recentered so
/// the typical (center) site sits at the origin. Flat-topped orientation: the
/// nearest-neighbor offset is (3/2 Rm, +-sqrt(3)/2 Rm) and site spacing is
/// sqrt(3) Rm. cluster_ids partition the sites into the three reuse-3 groups;
/// same-group sites are at distance >= 3 Rm.
struct HexGrid {
    int rows = 6;
    int cols = 6;
    std::vector<Vec2> bs_positions;
    std::vector<int> cluster_ids;
    std::size_t typical_cell_index = 0;

    int typical_cluster() const { return cluster_ids[typical_cell_index]; }
};

HexGrid make_hex_grid(const NetworkGeometry& g, int rows, int cols);

/// Convert a position given in the serving-BS frame (range rho, azimuth) into
/// the small-cell frame (r, psi) used by the outage analysis.
void bs_frame_to_small_cell(const NetworkGeometry& g, double rho, double azimuth,
                            double& r, double& psi);

/// The three guard-border probe positions used for the outage comparisons,
/// already converted into the small-cell (r, psi) frame.
std::vector<std::pair<double, double>> guard_border_probes(const NetworkGeometry& g);

}  // namespace dsr
