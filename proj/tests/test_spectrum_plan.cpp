#include <doctest.h>

#include <cmath>
#include <set>

#include "dsr/angles.hpp"
#include "dsr/spectrum_plan.hpp"
#include "test_helpers.hpp"

using namespace dsr;

namespace {

// Independent interval-cover oracle working straight from frequencies.
std::set<int> cover_oracle(double lo_hz, double hi_hz) {
    std::set<int> prbs;
    for (int p = 0; p < PrbGrid::kNumPrb; ++p) {
        const double plo = PrbGrid::prb_low_hz(p);
        const double phi = PrbGrid::prb_high_hz(p);
        if (std::max(lo_hz, plo) < std::min(hi_hz, phi)) prbs.insert(p);
    }
    return prbs;
}

}  // namespace

TEST_CASE("carrier grid partition") {
    const CarrierGrid grid = build_carrier_grid();
    REQUIRE(grid.carriers.size() == 48);

    int traffic = 0, control = 0;
    std::array<int, 3> per_sector{0, 0, 0};
    std::set<int> control_groups;
    for (const Carrier& c : grid.carriers) {
        if (c.kind == Carrier::Kind::traffic) {
            ++traffic;
            REQUIRE(c.sector >= 0);
            ++per_sector[static_cast<std::size_t>(c.sector)];
            CHECK(c.control_group == -1);
        } else {
            ++control;
            CHECK(c.sector == -1);
            control_groups.insert(c.control_group);
        }
    }
    CHECK(traffic == 39);
    CHECK(control == 9);
    for (int s = 0; s < 3; ++s) CHECK(per_sector[static_cast<std::size_t>(s)] == 13);
    CHECK(control_groups.size() == 9);  // one carrier per 3/9 reuse group

    // centers strictly increasing, spaced 200 kHz, spans abutting
    for (std::size_t i = 1; i < grid.carriers.size(); ++i) {
        CHECK(grid.carriers[i].center_hz - grid.carriers[i - 1].center_hz ==
              doctest::Approx(200e3).epsilon(1e-12));
        CHECK(CarrierGrid::carrier_low_hz(static_cast<int>(i)) ==
              doctest::Approx(CarrierGrid::carrier_high_hz(static_cast<int>(i) - 1)));
    }
    // carriers plus the two edge guards tile the 10 MHz channel exactly
    CHECK(CarrierGrid::carrier_low_hz(0) == doctest::Approx(200e3));
    CHECK(CarrierGrid::carrier_high_hz(47) == doctest::Approx(10e6 - 200e3));
}

TEST_CASE("guard region sizing") {
    const double sector_area = std::sqrt(3.0) / 2.0 * 1000.0 * 1000.0;
    CHECK(size_guard_region(sector_area, 0.25) ==
          doctest::Approx(262.518783952166).epsilon(1e-12));
    CHECK(size_guard_region(sector_area, 0.0) == 0.0);
    for (double f : {0.05, 0.2, 0.4}) {
        CHECK(size_guard_region(sector_area, 2.0 * f) ==
              doctest::Approx(std::sqrt(2.0) * size_guard_region(sector_area, f)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(size_guard_region(sector_area, 1.5), std::invalid_argument);
}

TEST_CASE("guard sizing and reservation stay proportional within one carrier") {
    const double sector_bw = 14.0 * CarrierGrid::kCarrierHz;  // 13 traffic + 1 control
    for (double f : {0.1, 0.25, 0.3, 0.5, 0.9}) {
        const double reserved = reserved_bandwidth_for_fraction(f, sector_bw);
        CHECK(std::abs(reserved / sector_bw - f) <= CarrierGrid::kCarrierHz / sector_bw + 1e-12);
        CHECK(std::fmod(reserved, CarrierGrid::kCarrierHz) == doctest::Approx(0.0));
    }
}

TEST_CASE("prb reservation: default windows sit at the far block edge") {
    const CarrierGrid grid = build_carrier_grid();

    const SectorReservation s0 = reserve_prbs(grid, 0, 1e6);
    CHECK(s0.first_carrier == 0);
    CHECK(s0.prbs == std::vector<int>{0, 1, 2, 3});  // clipped by the channel-edge guard

    const SectorReservation s1 = reserve_prbs(grid, 1, 1e6);
    CHECK(s1.first_carrier == 13);
    CHECK(s1.prbs == std::vector<int>{12, 13, 14, 15, 16, 17, 18});

    const SectorReservation s2 = reserve_prbs(grid, 2, 1e6);
    CHECK(s2.first_carrier == 34);
    CHECK(s2.prbs == std::vector<int>{36, 37, 38, 39, 40, 41});

    for (const SectorReservation* r : {&s0, &s1, &s2}) {
        CHECK(r->n_carriers == 5);
        for (int p : r->prbs) CHECK_FALSE(PrbGrid::is_central(p));
        // minimal cover: matches the frequency-domain oracle exactly
        const double lo = CarrierGrid::carrier_low_hz(r->first_carrier);
        const double hi = CarrierGrid::carrier_high_hz(r->first_carrier + r->n_carriers - 1);
        const std::set<int> oracle = cover_oracle(lo, hi);
        CHECK(std::set<int>(r->prbs.begin(), r->prbs.end()) == oracle);
    }
}

TEST_CASE("prb reservation: brute force over every 1 MHz window") {
    const CarrierGrid grid = build_carrier_grid();
    for (int sector = 0; sector < 3; ++sector) {
        const auto [lo_c, hi_c] = CarrierGrid::traffic_block(sector);
        for (int first = lo_c; first + 4 <= hi_c; ++first) {
            const double lo = CarrierGrid::carrier_low_hz(first);
            const double hi = CarrierGrid::carrier_high_hz(first + 4);
            const std::set<int> oracle = cover_oracle(lo, hi);
            const bool central = std::any_of(oracle.begin(), oracle.end(), PrbGrid::is_central);
            if (central) {
                CHECK_THROWS_AS(reserve_prbs(grid, sector, 1e6, first), InfeasiblePlanError);
                continue;
            }
            const SectorReservation r = reserve_prbs(grid, sector, 1e6, first);
            CHECK(std::set<int>(r.prbs.begin(), r.prbs.end()) == oracle);
            // windows lying fully inside the PRB band need 6 or 7 PRBs
            if (lo >= PrbGrid::kBaseOffsetHz &&
                hi <= PrbGrid::prb_high_hz(PrbGrid::kNumPrb - 1)) {
                CHECK(r.prbs.size() >= 6);
                CHECK(r.prbs.size() <= 7);
            }
        }
    }
}

TEST_CASE("prb reservation: relocation, emptiness, infeasibility") {
    const CarrierGrid grid = build_carrier_grid();

    CHECK(reserve_prbs(grid, 1, 0.0).prbs.empty());

    // sector 1's default relocates away from the channel center automatically
    const SectorReservation s1 = reserve_prbs(grid, 1, 1e6);
    for (int p : s1.prbs) CHECK_FALSE(PrbGrid::is_central(p));

    // pinning the window onto the center is refused
    CHECK_THROWS_AS(reserve_prbs(grid, 1, 1e6, 21), InfeasiblePlanError);
    // window outside the sector block is refused
    CHECK_THROWS_AS(reserve_prbs(grid, 0, 1e6, 11), InfeasiblePlanError);
    // the whole block cannot avoid the sync region
    CHECK_THROWS_AS(reserve_prbs(grid, 1, 2.6e6), InfeasiblePlanError);
    // more carriers than the block holds
    CHECK_THROWS_AS(reserve_prbs(grid, 0, 3e6), InfeasiblePlanError);
}

TEST_CASE("power calibration: closed form is self-consistent at the budget") {
    const AnalysisContext ctx = test::reference_context(350.0);
    const NetworkGeometry g = ctx.geometry;
    const RadioParams rp = ctx.radio;
    const double p_l = calibrate_power(g, rp, ctx, 1.0);
    CHECK(p_l > 0.0);

    const double i0 = mean_cochannel_interference(ctx);
    const double sigma2 = noise_power(rp, ctx.gsm_channel_bw_hz);
    const double p_l_hat = p_l * rp.effective_l0();
    const double degradation = linear_to_db(
        (i0 + sigma2 + p_l_hat * std::pow(g.r_s, -rp.alpha)) / (i0 + sigma2));
    CHECK(degradation == doctest::Approx(1.0).epsilon(0.01));

    CHECK(calibrate_power(g, rp, ctx, 1e-9) < 1e-9 * p_l + 1e-12);

    // monotone in the guard radius and in the budget
    NetworkGeometry big = g;
    big.r_s = 1.3 * g.r_s;
    CHECK(calibrate_power(big, rp, ctx, 1.0) > p_l);
    CHECK(calibrate_power(g, rp, ctx, 2.0) > p_l);
}

TEST_CASE("calibrated power keeps the guard-border outage shift near 1 dB") {
    AnalysisContext ctx = test::reference_context(350.0);
    ctx.radio.p_l_w = calibrate_power(ctx.geometry, ctx.radio, ctx, 1.0);
    const double rs = ctx.geometry.r_s;

    auto level_crossing = [&](bool with_lte, double psi) {
        double lo = -20.0, hi = 60.0;
        for (int it = 0; it < 50; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (gsm_outage(rs, psi, db_to_linear(mid), with_lte, ctx) < 0.5) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    for (double psi : {0.0, kPi / 2.0}) {
        const double shift = level_crossing(false, psi) - level_crossing(true, psi);
        // the mean-SINR budget is 1 dB; the 50%-level shift tracks it closely
        CHECK(shift > 0.5);
        CHECK(shift < 1.3);
    }
}

TEST_CASE("deployment plan assembly") {
    const AnalysisContext ctx = test::reference_context(500.0);
    const DeploymentPlan plan =
        build_deployment_plan(ctx.geometry, ctx.radio, ctx, 1e6, CellIdPlan{});
    CHECK(plan.feasible);
    CHECK(plan.grid.carriers.size() == 48);
    CHECK(plan.p_l_w > 0.0);
    CHECK(plan.r_s == doctest::Approx(test::kTable1Rs));
    for (const SectorReservation& r : plan.reservations) {
        CHECK(r.prbs.size() >= 4);
        for (int p : r.prbs) CHECK_FALSE(PrbGrid::is_central(p));
    }
    CHECK_THROWS_AS(
        build_deployment_plan(ctx.geometry, ctx.radio, ctx, 1e6, CellIdPlan{{}}),
        InfeasiblePlanError);
}
