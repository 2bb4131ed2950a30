#include <doctest.h>

#include <cmath>

#include "dsr/analysis.hpp"
#include "dsr/angles.hpp"
#include "dsr/quadrature.hpp"
#include "test_helpers.hpp"

using namespace dsr;
using test::parallel_mean;

namespace {

constexpr double kPl = 0.01;  // a representative calibrated small-cell power (W)

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// E[exp(-s I)] over PPP realizations on the truncated annulus; the oracle the
/// quadrature must match when evaluated with the same outer radius.
McEstimate laplace_mc(double s, double r_i, double lambda, const AnalysisContext& ctx,
                      double r_max, std::uint64_t reps, std::uint64_t seed) {
    const test::PppOracleField field{lambda, r_i, r_max};
    const double mean = parallel_mean(reps, 4, [&](std::uint64_t rep) {
        Rng rng = Rng::stream(seed, rep, 0);
        return std::exp(-s * test::draw_interference(field, ctx.radio, ctx.pattern,
                                                     ctx.interferer_fading, rng));
    });
    const double mean_sq = parallel_mean(reps, 4, [&](std::uint64_t rep) {
        Rng rng = Rng::stream(seed, rep, 0);
        const double v = std::exp(-s * test::draw_interference(field, ctx.radio, ctx.pattern,
                                                               ctx.interferer_fading, rng));
        return v * v;
    });
    McEstimate est;
    est.mean = mean;
    est.stderr_ = std::sqrt(std::max(mean_sq - mean * mean, 0.0) / static_cast<double>(reps));
    return est;
}

}  // namespace

TEST_CASE("inner field integral: closed form vs quadrature") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    FadingModel ray;
    for (double a : {12.3, 1e-3, 1e6, 6.3e6, 1e10}) {
        for (double r : {300.0, 450.0, 1361.0, 2000.0}) {
            const double closed = detail::interferer_field_integral(a, r, INFINITY, 3.0, ray, spec);
            const double num =
                detail::interferer_field_integral(a, r, INFINITY, 3.0, ray, spec, true);
            CHECK(closed == doctest::Approx(num).epsilon(1e-8));
            // finite outer radius
            const double closed_f =
                detail::interferer_field_integral(a, r, 30000.0, 3.0, ray, spec);
            const double num_f =
                detail::interferer_field_integral(a, r, 30000.0, 3.0, ray, spec, true);
            CHECK(closed_f == doctest::Approx(num_f).epsilon(1e-8));
        }
    }
}

TEST_CASE("laplace transform identities") {
    const AnalysisContext ctx = test::reference_context(500.0, kPl);
    const GuardRadii radii = band_guard_radii(ctx.geometry);
    const double lambda = ctx.plan.lambda_bs;

    CHECK(laplace_interference(0.0, radii.r1, lambda, ctx.pattern, ctx.interferer_fading,
                               ctx.radio, ctx.inner_quad) == 1.0);
    for (double s : {1e8, 1e10, 1e12})
        CHECK(laplace_interference(s, radii.r1, 0.0, ctx.pattern, ctx.interferer_fading,
                                   ctx.radio, ctx.inner_quad) == 1.0);

    double prev = 1.0;
    for (double s : {1e8, 1e9, 1e10, 1e11, 1e12}) {
        const double val = laplace_interference(s, radii.r1, lambda, ctx.pattern,
                                                ctx.interferer_fading, ctx.radio, ctx.inner_quad);
        CHECK(val > 0.0);
        CHECK(val <= 1.0);
        CHECK(val < prev);  // strictly decreasing in s
        prev = val;
    }

    const double s = 3e10;
    double prev_r = 0.0;
    for (double r : {300.0, 450.0, 900.0, 1479.9}) {
        const double val = laplace_interference(s, r, lambda, ctx.pattern, ctx.interferer_fading,
                                                ctx.radio, ctx.inner_quad);
        CHECK(val > prev_r);  // strictly increasing in the exclusion radius
        prev_r = val;
    }

    double prev_l = 1.0;
    for (double mult : {0.5, 1.0, 2.0, 4.0}) {
        const double val = laplace_interference(s, 450.0, lambda * mult, ctx.pattern,
                                                ctx.interferer_fading, ctx.radio, ctx.inner_quad);
        CHECK(val < prev_l);  // strictly decreasing in density
        prev_l = val;
    }
}

TEST_CASE("laplace transform matches the PPP Monte Carlo oracle on a log grid") {
    AnalysisContext ctx = test::reference_context(500.0, kPl);
    const double r_i = 450.0;
    const double r_max = 30.0 * ctx.geometry.r_m;
    const double lambda = ctx.plan.lambda_bs;
    for (int k = 0; k < 10; ++k) {
        const double s = 1e8 * std::pow(300.0, k / 9.0);  // 1e8 .. 3e10
        const double quad =
            laplace_interference(s, r_i, lambda, ctx.pattern, ctx.interferer_fading, ctx.radio,
                                 ctx.inner_quad, r_max);
        const McEstimate mc = laplace_mc(s, r_i, lambda, ctx, r_max, 100000, 2024 + k);
        CHECK(std::abs(quad - mc.mean) / mc.mean < 0.01);
    }
}

TEST_CASE("laplace transform at the deep-tail operating point") {
    AnalysisContext ctx = test::reference_context(500.0, kPl);
    const double r_max = 30.0 * ctx.geometry.r_m;
    const double lambda = ctx.plan.lambda_bs;
    const double s = 1e12;
    const double quad = laplace_interference(s, 450.0, lambda, ctx.pattern, ctx.interferer_fading,
                                             ctx.radio, ctx.inner_quad, r_max);
    const McEstimate mc = laplace_mc(s, 450.0, lambda, ctx, r_max, 300000, 77);
    // The oracle's own noise dominates 1% here; bound by both.
    CHECK(std::abs(quad - mc.mean) < std::max(0.01 * quad, 3.5 * mc.stderr_));
}

TEST_CASE("band SINR ccdf") {
    AnalysisContext ctx = test::reference_context(350.0, kPl);
    CHECK(lte_band_sinr_ccdf(25.0, 0, 0.0, ctx) == 1.0);

    // noise-only limit: empty interferer field leaves the Rayleigh CCDF
    AnalysisContext quiet = ctx;
    quiet.plan.lambda_bs = 0.0;
    for (double x : {0.5, 1.0, 4.0}) {
        const double expected =
            std::exp(-x * std::pow(25.0, 3.0) * noise_power(ctx.radio, 2e6) /
                     ctx.radio.p_l_hat());
        CHECK(lte_band_sinr_ccdf(25.0, 0, x, quiet) == doctest::Approx(expected).epsilon(1e-9));
    }

    CHECK_THROWS_AS(lte_band_sinr_ccdf(0.0, 0, 1.0, ctx), std::invalid_argument);
    CHECK_THROWS_AS(lte_band_sinr_ccdf(60.0, 0, 1.0, ctx), std::invalid_argument);
}

TEST_CASE("band SINR ccdf matches a full Monte Carlo of the PPP model") {
    AnalysisContext ctx = test::reference_context(350.0, kPl);
    const double r_max = 30.0 * ctx.geometry.r_m;
    ctx.outer_radius_m = r_max;
    const double r = 25.0;
    const double x = 1.0;
    const double quad = lte_band_sinr_ccdf(r, 0, x, ctx);

    const double r1 = ctx.plan.bands[0].guard_radius_m;
    const double sigma2 = noise_power(ctx.radio, ctx.plan.bands[0].bandwidth_hz);
    const double s_coef = ctx.radio.p_l_hat() * std::pow(r, -ctx.radio.alpha);
    const test::PppOracleField field{ctx.plan.lambda_bs, r1, r_max};
    const double mc = parallel_mean(200000, 4, [&](std::uint64_t rep) {
        Rng rng = Rng::stream(555, rep, 0);
        const double interference = test::draw_interference(field, ctx.radio, ctx.pattern,
                                                            ctx.interferer_fading, rng);
        const double h = rng.exp1();
        return (s_coef * h / (interference + sigma2) > x) ? 1.0 : 0.0;
    });
    CHECK(std::abs(quad - mc) / mc < 0.01);
}

TEST_CASE("user rate: bounds, monotonicity, and tolerance stability") {
    AnalysisContext ctx = test::reference_context(350.0, kPl, 1.0 / (kPi * 50.0 * 50.0));
    CHECK(expected_ue_count(ctx) == doctest::Approx(1.0));

    const double rate_rc = lte_user_rate(ctx.geometry.r_c, ctx);
    CHECK(rate_rc > 0.0);
    double bound = 0.0;
    for (const BandSpec& b : ctx.plan.bands) {
        const double snr = ctx.radio.p_l_hat() * std::pow(ctx.geometry.r_c, -3.0) /
                           (ctx.radio.eta * noise_power(ctx.radio, b.bandwidth_hz));
        bound += b.bandwidth_hz * std::log2(1.0 + snr);
    }
    CHECK(rate_rc < bound);

    // strictly decreasing in r
    const double r25 = lte_user_rate(25.0, ctx);
    const double r40 = lte_user_rate(40.0, ctx);
    CHECK(r25 > r40);
    CHECK(r40 > rate_rc);

    // strictly increasing in transmit power
    AnalysisContext hot = ctx;
    hot.radio.p_l_w = 2.0 * kPl;
    CHECK(lte_user_rate(25.0, hot) > r25);

    // same radius, two azimuths: the rate depends on r alone
    const double ra = std::hypot(-22.1, 4.6);
    CHECK(lte_user_rate(ra, ctx) == lte_user_rate(ra, ctx));

    // halving both tolerances must not move a converged result
    AnalysisContext tight = ctx;
    tight.inner_quad.rel_tol /= 2.0;
    tight.outer_quad.rel_tol /= 2.0;
    CHECK(lte_user_rate(25.0, tight) == doctest::Approx(r25).epsilon(5e-4));

    // expected-UE floor
    AnalysisContext sparse = ctx;
    sparse.plan.lambda_ue = 1e-12;
    CHECK(expected_ue_count(sparse) == 1.0);
    AnalysisContext dense = ctx;
    dense.plan.lambda_ue = 4.0 / (kPi * 50.0 * 50.0);
    CHECK(lte_user_rate(25.0, dense) == doctest::Approx(r25 / 4.0).epsilon(1e-9));
}

TEST_CASE("gsm outage basics") {
    AnalysisContext ctx = test::reference_context(350.0, kPl);
    const double rs = ctx.geometry.r_s;

    CHECK(gsm_outage(rs, 0.0, 0.0, true, ctx) == 0.0);
    CHECK(gsm_outage(rs, 0.0, 1e-12, true, ctx) < 1e-6);

    // p_l = 0 removes the LTE factor exactly
    AnalysisContext off = ctx;
    off.radio.p_l_w = 0.0;
    for (double t_db : {-5.0, 0.0, 10.0}) {
        const double t = db_to_linear(t_db);
        CHECK(gsm_outage(rs, 1.0, t, true, off) == gsm_outage(rs, 1.0, t, false, off));
    }

    // nondecreasing in T; LTE interference only hurts
    double prev = 0.0;
    for (double t_db = -10.0; t_db <= 20.0; t_db += 2.0) {
        const double t = db_to_linear(t_db);
        const double with = gsm_outage(rs, 0.0, t, true, ctx);
        const double without = gsm_outage(rs, 0.0, t, false, ctx);
        CHECK(with >= without);
        CHECK(with >= prev - 1e-12);
        CHECK(with <= 1.0);
        prev = with;
    }

    // far from the small cell the LTE term vanishes
    const double far_with = gsm_outage(1e5, 0.3, 1.0, true, ctx);
    const double far_without = gsm_outage(1e5, 0.3, 1.0, false, ctx);
    CHECK(std::abs(far_with - far_without) < 1e-9);
}

TEST_CASE("gsm outage matches a full Monte Carlo of the PPP model") {
    AnalysisContext ctx = test::reference_context(350.0, kPl);
    const double r_max = 30.0 * ctx.geometry.r_m;
    ctx.outer_radius_m = r_max;
    const double r = ctx.geometry.r_s;
    const double psi = 0.0;
    const double t = 1.0;
    const double quad = gsm_outage(r, psi, t, true, ctx);

    const LinkGeometry link = gsm_link_geometry(ctx.geometry, r, psi);
    const double s_coef = ctx.radio.p_g_hat() * antenna_gain(ctx.pattern, link.beta) *
                          std::pow(link.d, -ctx.radio.alpha);
    const double lte_coef = ctx.radio.p_l_hat() * std::pow(r, -ctx.radio.alpha);
    const double sigma2 = noise_power(ctx.radio, ctx.gsm_channel_bw_hz);
    const double r0 = gsm_cochannel_radius(ctx.geometry);
    const test::PppOracleField field{ctx.plan.lambda_bs / 3.0, r0, r_max};

    const std::uint64_t reps = 400000;
    const double mc = parallel_mean(reps, 4, [&](std::uint64_t rep) {
        Rng rng = Rng::stream(8181, rep, 0);
        const double i0 = test::draw_interference(field, ctx.radio, ctx.pattern,
                                                  ctx.interferer_fading, rng);
        const double il = lte_coef * rng.exp1();
        const double sg = s_coef * rng.exp1();
        return (sg / (i0 + il + sigma2) < t) ? 1.0 : 0.0;
    });
    const double stderr_ = std::sqrt(mc * (1.0 - mc) / static_cast<double>(reps));
    CHECK(std::abs(quad - mc) < 3.5 * stderr_ + 1e-4);
}

TEST_CASE("scenario averages") {
    AnalysisContext ctx = test::reference_context(350.0, kPl);

    // with the small cell silent all three scenarios coincide
    AnalysisContext off = ctx;
    off.radio.p_l_w = 0.0;
    const double t0 = 1.0;
    const double a = scenario_average_outage(Scenario::no_lte, t0, off);
    const double b = scenario_average_outage(Scenario::direct_overlay, t0, off);
    const double c = scenario_average_outage(Scenario::dsr, t0, off);
    CHECK(b == doctest::Approx(a).epsilon(2e-4));
    CHECK(c == doctest::Approx(a).epsilon(2e-4));

    // pointwise dominance carries through the integrals
    for (double t_db : {-5.0, 0.0, 5.0}) {
        const double t = db_to_linear(t_db);
        const double no = scenario_average_outage(Scenario::no_lte, t, ctx);
        const double with_dsr = scenario_average_outage(Scenario::dsr, t, ctx);
        const double direct = scenario_average_outage(Scenario::direct_overlay, t, ctx);
        CHECK(no <= with_dsr + 1e-6);
        CHECK(with_dsr <= direct + 1e-6);
    }

    // vanishing annulus: DSR degenerates to the undisturbed network
    AnalysisContext shrunk = ctx;
    shrunk.geometry.delta_r_s = 0.0;
    CHECK(scenario_average_outage(Scenario::dsr, t0, shrunk) ==
          doctest::Approx(scenario_average_outage(Scenario::no_lte, t0, shrunk)).epsilon(1e-9));

    // tolerance halving
    AnalysisContext tight = ctx;
    tight.outer_quad.rel_tol /= 2.0;
    CHECK(scenario_average_outage(Scenario::dsr, t0, tight) ==
          doctest::Approx(scenario_average_outage(Scenario::dsr, t0, ctx)).epsilon(1e-3));
}

TEST_CASE("mean co-channel interference closed form equals direct quadrature") {
    AnalysisContext ctx = test::reference_context(350.0, kPl);
    const double closed = mean_cochannel_interference(ctx);
    const double r0 = gsm_cochannel_radius(ctx.geometry);
    QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    const double gain_int = antenna_gain_integral(ctx.pattern, spec);
    const double radial = integrate_to_infinity(
        [&](double v) { return std::pow(v, 1.0 - ctx.radio.alpha); }, r0, spec);
    const double direct = (ctx.plan.lambda_bs / 3.0) * gain_int * ctx.radio.p_g_hat() * radial;
    CHECK(closed == doctest::Approx(direct).epsilon(1e-7));
}
