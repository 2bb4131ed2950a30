#include "dsr/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "dsr/angles.hpp"

namespace dsr {

namespace {

/// K(x) = int_x^inf u/(u^3+1) du, the alpha = 3 Rayleigh kernel.
double rayleigh_kernel_a3(double x) {
    if (x > 1e4) {
        // Series of int u^-2 (1 - u^-3 + u^-6 - ...) du; exact to machine here.
        const double x4 = std::pow(x, 4);
        return 1.0 / x - 1.0 / (4.0 * x4) + 1.0 / (7.0 * x4 * x * x * x);
    }
    const double f = (1.0 / 6.0) * std::log((x * x - x + 1.0) / ((x + 1.0) * (x + 1.0))) +
                     (1.0 / std::sqrt(3.0)) * std::atan((2.0 * x - 1.0) / std::sqrt(3.0));
    return kPi / (2.0 * std::sqrt(3.0)) - f;
}

double fading_complement(double omega, const FadingModel& fading) {
    // 1 - L_F(omega) for the interferer fading distribution.
    switch (fading.kind) {
        case FadingModel::Kind::rayleigh:
            return omega / (1.0 + omega);
        case FadingModel::Kind::deterministic_unit:
            return -std::expm1(-omega);
    }
    return 0.0;
}

}  // namespace

namespace detail {

double interferer_field_integral(double a, double r_lo, double r_hi, double alpha,
                                 const FadingModel& fading, const QuadratureSpec& spec,
                                 bool force_quadrature) {
    if (a <= 0.0) return 0.0;
    const bool closed_form = !force_quadrature && alpha == 3.0 &&
                             fading.kind == FadingModel::Kind::rayleigh;
    if (closed_form) {
        const double c = std::cbrt(a);
        double val = c * c * rayleigh_kernel_a3(r_lo / c);
        if (std::isfinite(r_hi)) val -= c * c * rayleigh_kernel_a3(r_hi / c);
        return val;
    }
    auto integrand = [a, alpha, &fading](double v) {
        return v * fading_complement(a * std::pow(v, -alpha), fading);
    };
    if (std::isfinite(r_hi)) return integrate(integrand, r_lo, r_hi, spec);
    return integrate_to_infinity(integrand, r_lo, spec);
}

}  // namespace detail

BandPlanAnalysis band_plan_from_geometry(const NetworkGeometry& g,
                                         const std::array<double, 3>& bandwidths_hz,
                                         double lambda_ue) {
    const GuardRadii radii = band_guard_radii(g);
    BandPlanAnalysis plan;
    plan.bands = {BandSpec{bandwidths_hz[0], radii.r1, sector_boresight(0)},
                  BandSpec{bandwidths_hz[1], radii.r2, sector_boresight(1)},
                  BandSpec{bandwidths_hz[2], radii.r3, sector_boresight(2)}};
    plan.lambda_bs = 2.0 / (3.0 * std::sqrt(3.0) * g.r_m * g.r_m);
    plan.lambda_ue = lambda_ue;
    return plan;
}

double expected_ue_count(const AnalysisContext& ctx) {
    const double n = ctx.plan.lambda_ue * kPi * ctx.geometry.r_c * ctx.geometry.r_c;
    return std::max(1.0, n);
}

double laplace_interference(double s, double r_i, double lambda, const AntennaPattern& pattern,
                            const FadingModel& fading, const RadioParams& rp,
                            const QuadratureSpec& spec, double outer_radius) {
    if (s < 0.0) throw std::invalid_argument("laplace_interference: s must be >= 0");
    if (!(r_i > 0.0)) throw std::invalid_argument("laplace_interference: r_i must be > 0");
    rp.validate();
    if (s == 0.0 || lambda <= 0.0) return 1.0;

    const double pg = rp.p_g_hat();
    const double alpha = rp.alpha;
    auto radial = [&](double gain) {
        return detail::interferer_field_integral(s * pg * gain, r_i, outer_radius, alpha, fading,
                                                 spec);
    };

    double angular = 0.0;
    if (pattern.kind == AntennaPattern::Kind::omni) {
        angular = kTwoPi * radial(1.0);
    } else {
        // The pattern is even in phi and constant beyond the floor crossing, so
        // only [0, phi_floor] needs adaptive work.
        const double phi_f = std::min(pattern.floor_angle_rad(), kPi);
        const double main = integrate(
            [&](double phi) { return radial(antenna_gain(pattern, phi)); }, 0.0, phi_f, spec);
        const double floor_gain = std::pow(10.0, -pattern.floor_db / 10.0);
        angular = 2.0 * (main + (kPi - phi_f) * radial(floor_gain));
    }
    return std::exp(-lambda * angular);
}

double lte_band_sinr_ccdf(double r, std::size_t band, double x, const AnalysisContext& ctx) {
    if (!(r > 0.0) || r > ctx.geometry.r_c + 1e-9)
        throw std::invalid_argument("lte_band_sinr_ccdf: r must lie in (0, r_c]");
    if (x < 0.0) throw std::invalid_argument("lte_band_sinr_ccdf: threshold must be >= 0");
    if (band >= ctx.plan.bands.size()) throw std::invalid_argument("lte_band_sinr_ccdf: bad band index");
    if (!(ctx.radio.p_l_w > 0.0))
        throw std::invalid_argument("lte_band_sinr_ccdf: p_l not set (calibrate or configure it)");
    if (x == 0.0) return 1.0;

    const BandSpec& b = ctx.plan.bands[band];
    const double s = x * std::pow(r, ctx.radio.alpha) / ctx.radio.p_l_hat();
    const double sigma2 = noise_power(ctx.radio, b.bandwidth_hz);
    const double lap = laplace_interference(s, b.guard_radius_m, ctx.plan.lambda_bs, ctx.pattern,
                                            ctx.interferer_fading, ctx.radio, ctx.inner_quad,
                                            ctx.outer_radius_m);
    return std::exp(-s * sigma2) * lap;
}

double lte_user_rate(double r, const AnalysisContext& ctx) {
    if (!(r > 0.0) || r > ctx.geometry.r_c + 1e-9)
        throw std::invalid_argument("lte_user_rate: r must lie in (0, r_c]");
    const double eta = ctx.radio.eta;
    const double pl = ctx.radio.p_l_hat();
    const double r_alpha = std::pow(r, ctx.radio.alpha);
    const double eps = ctx.outer_quad.tail_epsilon;

    double total = 0.0;
    for (std::size_t i = 0; i < ctx.plan.bands.size(); ++i) {
        const BandSpec& b = ctx.plan.bands[i];
        const double sigma2 = noise_power(ctx.radio, b.bandwidth_hz);
        // Beyond t_max even the interference-free CCDF is below tail_epsilon.
        const double t_max = std::log2(1.0 + pl * std::log(1.0 / eps) / (eta * r_alpha * sigma2));
        auto integrand = [&](double t) {
            return lte_band_sinr_ccdf(r, i, eta * (std::exp2(t) - 1.0), ctx);
        };
        total += b.bandwidth_hz * integrate(integrand, 0.0, t_max, ctx.outer_quad);
    }
    return total / expected_ue_count(ctx);
}

double gsm_outage(double r, double psi, double T, bool with_lte, const AnalysisContext& ctx) {
    if (T < 0.0) throw std::invalid_argument("gsm_outage: threshold must be >= 0");
    if (T == 0.0) return 0.0;
    const LinkGeometry link = gsm_link_geometry(ctx.geometry, r, psi);
    const double gain = antenna_gain(ctx.pattern, link.beta);
    const double s =
        T * std::pow(link.d, ctx.radio.alpha) / (ctx.radio.p_g_hat() * gain);

    std::optional<double> beta;
    if (ctx.r0_variant == CochannelRadiusVariant::proof) beta = link.beta;
    const double r0 = gsm_cochannel_radius(ctx.geometry, ctx.r0_variant, beta);

    const double lap0 =
        laplace_interference(s, r0, ctx.plan.lambda_bs / 3.0, ctx.pattern, ctx.interferer_fading,
                             ctx.radio, ctx.inner_quad, ctx.outer_radius_m);
    double lap_lte = 1.0;
    if (with_lte && ctx.radio.p_l_w > 0.0) {
        if (r == 0.0) return 1.0;  // co-located with the small cell
        lap_lte = 1.0 / (1.0 + s * ctx.radio.p_l_hat() * std::pow(r, -ctx.radio.alpha));
    }
    const double sigma2 = noise_power(ctx.radio, ctx.gsm_channel_bw_hz);
    return 1.0 - std::exp(-s * sigma2) * lap0 * lap_lte;
}

namespace {

double outage_disk_integral(double r_lo, double r_hi, bool with_lte, double T,
                            const AnalysisContext& ctx) {
    if (r_hi <= r_lo) return 0.0;
    auto radial = [&](double r) {
        auto angular = [&](double psi) { return gsm_outage(r, psi, T, with_lte, ctx); };
        return r * integrate(angular, 0.0, kTwoPi, ctx.outer_quad);
    };
    return integrate(radial, r_lo, r_hi, ctx.outer_quad);
}

}  // namespace

double scenario_average_outage(Scenario scenario, double T, const AnalysisContext& ctx) {
    const double r_s = ctx.geometry.r_s;
    const double r_tot = r_s + ctx.geometry.delta_r_s;
    const double norm = 1.0 / (kPi * r_tot * r_tot);
    switch (scenario) {
        case Scenario::no_lte:
            return norm * outage_disk_integral(0.0, r_tot, false, T, ctx);
        case Scenario::direct_overlay:
            return norm * outage_disk_integral(0.0, r_tot, true, T, ctx);
        case Scenario::dsr:
            return norm * (outage_disk_integral(0.0, r_s, false, T, ctx) +
                           outage_disk_integral(r_s, r_tot, true, T, ctx));
    }
    return 0.0;
}

double mean_cochannel_interference(const AnalysisContext& ctx) {
    const double r0 = gsm_cochannel_radius(ctx.geometry, ctx.r0_variant);
    const double alpha = ctx.radio.alpha;
    const double gain_int = antenna_gain_integral(ctx.pattern, ctx.inner_quad);
    double radial = std::pow(r0, 2.0 - alpha) / (alpha - 2.0);
    if (std::isfinite(ctx.outer_radius_m))
        radial -= std::pow(ctx.outer_radius_m, 2.0 - alpha) / (alpha - 2.0);
    return (ctx.plan.lambda_bs / 3.0) * gain_int * ctx.radio.p_g_hat() * radial;
}

}  // namespace dsr
