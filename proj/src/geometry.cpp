#include "dsr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dsr/angles.hpp"

namespace dsr {

double Vec2::norm() const { return std::hypot(x, y); }
double Vec2::azimuth() const { return std::atan2(y, x); }

void NetworkGeometry::validate() const {
    if (!(r_m > 0.0)) throw std::invalid_argument("geometry.r_m must be > 0");
    if (!(r_c > 0.0)) throw std::invalid_argument("geometry.r_c must be > 0");
    if (!(r_c <= r_s)) throw std::invalid_argument("geometry.r_s must be >= r_c (guard encloses coverage)");
    if (!(delta_r_s >= 0.0)) throw std::invalid_argument("geometry.delta_r_s must be >= 0");
    if (!(d > r_c)) throw std::invalid_argument("geometry.d must exceed r_c (coverage must not contain the macro BS)");
    if (theta <= -kPi || theta > kPi) throw std::invalid_argument("geometry.theta must lie in (-pi, pi]");
}

Vec2 NetworkGeometry::small_cell_position() const {
    return {d * std::cos(theta), d * std::sin(theta)};
}

GuardRadii band_guard_radii(const NetworkGeometry& g) {
    if (!(g.d > g.r_c)) throw std::invalid_argument("band_guard_radii: requires d > r_c");
    GuardRadii out;
    out.r1 = g.d - g.r_c;
    out.r2 = std::sqrt(std::pow(1.5 * g.r_m - g.d + g.r_c, 2) + 0.75 * g.r_m * g.r_m);
    out.r3 = out.r2;
    out.r0 = gsm_cochannel_radius(g);
    return out;
}

LinkGeometry gsm_link_geometry(const NetworkGeometry& g, double r, double psi) {
    if (!(r >= 0.0)) throw std::invalid_argument("gsm_link_geometry: r must be >= 0");
    if (r == 0.0 && g.d == 0.0)
        throw std::invalid_argument("gsm_link_geometry: user coincides with the serving BS");
    psi = wrap_2pi(psi);
    const double d = std::sqrt(g.d * g.d + r * r - 2.0 * r * g.d * std::cos(kPi - psi));
    if (d == 0.0)
        throw std::invalid_argument("gsm_link_geometry: user coincides with the serving BS");
    // Angle at the BS between the small-cell direction and the user direction.
    // The argument hits exactly +-1 at collinear configurations; clamp to absorb
    // floating-point drift there.
    double arg = (g.d * g.d + d * d - r * r) / (2.0 * g.d * d);
    arg = std::clamp(arg, -1.0, 1.0);
    const double beta_tilde = std::acos(arg);
    const double beta = (psi < kPi) ? g.theta + beta_tilde : g.theta - beta_tilde;
    return {d, beta};
}

double gsm_cochannel_radius(const NetworkGeometry& g, CochannelRadiusVariant variant,
                            std::optional<double> beta) {
    switch (variant) {
        case CochannelRadiusVariant::theorem:
            return std::sqrt(9.0 * g.r_m * g.r_m + g.d * g.d -
                             6.0 * g.d * g.r_m * std::cos(2.0 * kPi / 3.0 - std::abs(g.theta)));
        case CochannelRadiusVariant::proof: {
            const double b = beta.value_or(g.theta);
            const double u = std::sqrt(3.0) / 2.0 * g.r_m - g.d * std::sin(b);
            const double v = 1.5 * g.r_m + g.d * std::cos(b);
            return std::sqrt(u * u + v * v);
        }
    }
    return 0.0;
}

bool point_in_hexagon(const Vec2& p, const Vec2& c, double r_m) {
    // Flat-topped hexagon: vertices at angles 0, 60, ..., 300 degrees, edge
    // normals at 30 + 60k degrees, apothem sqrt(3)/2 * r_m.
    const double apothem = std::sqrt(3.0) / 2.0 * r_m;
    const Vec2 q = p - c;
    for (int k = 0; k < 6; ++k) {
        const double a = deg_to_rad(30.0 + 60.0 * k);
        if (q.x * std::cos(a) + q.y * std::sin(a) > apothem) return false;
    }
    return true;
}

double sector_boresight(int sector) { return wrap_pi(2.0 * kPi / 3.0 * sector); }

int serving_sector_index(double azimuth) {
    int best = 0;
    double best_diff = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        const double diff = std::abs(angle_diff(azimuth, sector_boresight(i)));
        if (diff < best_diff) {
            best_diff = diff;
            best = i;
        }
    }
    return best;
}

bool validate_placement(const NetworkGeometry& g) {
    const Vec2 center = g.small_cell_position();
    const double apothem = std::sqrt(3.0) / 2.0 * g.r_m;

    // Guard disk inside the hexagon: every half-plane leaves r_s of slack.
    for (int k = 0; k < 6; ++k) {
        const double a = deg_to_rad(30.0 + 60.0 * k);
        if (center.x * std::cos(a) + center.y * std::sin(a) > apothem - g.r_s) return false;
    }

    // Guard disk inside the serving 120-degree wedge.
    const double boresight = sector_boresight(serving_sector_index(g.theta));
    const double a_hi = boresight + kPi / 3.0;
    const double a_lo = boresight - kPi / 3.0;
    const double slack_hi = center.x * std::sin(a_hi) - center.y * std::cos(a_hi);
    const double slack_lo = -center.x * std::sin(a_lo) + center.y * std::cos(a_lo);
    return slack_hi >= g.r_s && slack_lo >= g.r_s;
}

HexGrid make_hex_grid(const NetworkGeometry& g, int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("hex grid dimensions must be >= 1");
    HexGrid grid;
    grid.rows = rows;
    grid.cols = cols;
    grid.bs_positions.reserve(static_cast<std::size_t>(rows) * cols);
    grid.cluster_ids.reserve(static_cast<std::size_t>(rows) * cols);

    // Axial basis a1 = (3/2, sqrt(3)/2) Rm (column step), a2 = (0, sqrt(3)) Rm
    // (row step). Cluster id (i - j) mod 3 puts same-id sites on the reuse-3
    // sublattice with minimum spacing 3 Rm.
    const double sq3 = std::sqrt(3.0);
    std::vector<std::pair<int, int>> axial;
    for (int i = 0; i < cols; ++i) {
        for (int j = 0; j < rows; ++j) {
            grid.bs_positions.push_back({1.5 * g.r_m * i, sq3 * g.r_m * (j + 0.5 * i)});
            grid.cluster_ids.push_back(((i - j) % 3 + 3) % 3);
            axial.emplace_back(i, j);
        }
    }

    Vec2 centroid{0.0, 0.0};
    for (const auto& p : grid.bs_positions) centroid = centroid + p;
    centroid = centroid * (1.0 / static_cast<double>(grid.bs_positions.size()));

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.bs_positions.size(); ++k) {
        const double dist = (grid.bs_positions[k] - centroid).norm();
        if (dist < best) {
            best = dist;
            grid.typical_cell_index = k;
        }
    }
    const Vec2 origin = grid.bs_positions[grid.typical_cell_index];
    for (auto& p : grid.bs_positions) p = p - origin;
    return grid;
}

void bs_frame_to_small_cell(const NetworkGeometry& g, double rho, double azimuth,
                            double& r, double& psi) {
    const Vec2 user{rho * std::cos(azimuth), rho * std::sin(azimuth)};
    const Vec2 off = user - g.small_cell_position();
    r = off.norm();
    psi = (r == 0.0) ? 0.0 : wrap_2pi(off.azimuth() - g.theta);
}

std::vector<std::pair<double, double>> guard_border_probes(const NetworkGeometry& g) {
    if (!(g.r_s < g.d))
        throw std::invalid_argument("guard_border_probes: requires r_s < d");
    std::vector<std::pair<double, double>> probes;
    probes.reserve(3);
    double r = 0.0, psi = 0.0;
    bs_frame_to_small_cell(g, g.d + g.r_s, g.theta, r, psi);
    probes.emplace_back(r, psi);
    const double delta_theta = std::acos(g.r_s / g.d);
    bs_frame_to_small_cell(g, std::sqrt(g.d * g.d - g.r_s * g.r_s), g.theta + delta_theta, r, psi);
    probes.emplace_back(r, psi);
    bs_frame_to_small_cell(g, g.d - g.r_s, g.theta, r, psi);
    probes.emplace_back(r, psi);
    return probes;
}

}  // namespace dsr
