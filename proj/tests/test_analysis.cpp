#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "mmcs/analysis.hpp"

using namespace mmcs;

namespace {

// reference setup: 30 + 30 sites/km^2, rho 0.5, P_th at noise floor + 15 dB,
// announcement threshold at the noise floor
AnalysisContext make_ctx(Protocol p, double rho = 0.5, double p_th_offset_db = 15.0,
                         double p_th_a_offset_db = 0.0) {
    AnalysisContext ctx;
    ctx.scenario.protocol = p;
    ctx.scenario.model.rho = rho;
    double nf = noise_floor_dbm(ctx.scenario.noise);
    ctx.scenario.sensing.p_th_mw = dbm_to_mw(nf + p_th_offset_db);
    ctx.scenario.sensing.p_th_a_mw = dbm_to_mw(nf + p_th_a_offset_db);
    return ctx;
}

bool near(double a, double b, double tol) { return std::abs(a - b) < tol; }

}  // namespace

TEST_CASE("u function basics") {
    auto ctx = make_ctx(Protocol::non_cs);
    // s = 0 or an idle interferer population leaves the transform at one
    CHECK(u_function(0.0, 100.0, LinkType::los, 0.5, ctx) == doctest::Approx(1.0));
    CHECK(u_function(1e9, 100.0, LinkType::los, 0.0, ctx) == doctest::Approx(1.0));

    // matches the atom sum computed by hand
    auto g = interferer_gain_distribution(ctx.scenario.antenna);
    for (double s : {1e6, 1e8, 1e10}) {
        for (auto link : {LinkType::los, LinkType::nlos}) {
            double pl = path_loss(150.0, link, ctx.scenario.pl);
            double expect =
                1.0 - 0.5 * g.expected([&](double gain) {
                    double x = s * pl * gain;
                    return x / (1.0 + x);
                });
            CHECK(u_function(s, 150.0, link, 1.0, ctx) == doctest::Approx(expect).epsilon(1e-12));
        }
    }

    // decreasing in s, increasing in range, bounded by the idle chance
    double prev = 1.0;
    for (double s : {1e6, 1e7, 1e8, 1e9}) {
        double v = u_function(s, 100.0, LinkType::los, 1.0, ctx);
        CHECK(v < prev);
        CHECK(v >= 0.5);  // at most half the population is ever active
        prev = v;
    }
    CHECK(u_function(1e8, 50.0, LinkType::los, 1.0, ctx) <
          u_function(1e8, 500.0, LinkType::los, 1.0, ctx));

    CHECK_THROWS_AS(u_function(-1.0, 100.0, LinkType::los, 0.5, ctx), std::invalid_argument);
    CHECK_THROWS_AS(u_function(1.0, 0.0, LinkType::los, 0.5, ctx), std::invalid_argument);
    CHECK_THROWS_AS(u_function(1.0, 100.0, LinkType::los, 1.5, ctx), std::invalid_argument);
}

TEST_CASE("mean exclusion radii") {
    SUBCASE("no sensing, no exclusion") {
        auto r = avg_exclusion_radii(make_ctx(Protocol::non_cs));
        CHECK(r.h_los == 0.0);
        CHECK(r.h_nlos == 0.0);
        CHECK(r.d_los == 0.0);
    }
    SUBCASE("quasi-omni receiver sensing") {
        auto r = avg_exclusion_radii(make_ctx(Protocol::ocsr));
        CHECK(r.h_los == doctest::Approx(752.053153).epsilon(1e-7));
        CHECK(r.h_nlos == doctest::Approx(14.503972).epsilon(1e-7));
        CHECK(r.d_los == 0.0);
        CHECK(r.h(LinkType::los) == r.h_los);
        CHECK(r.h(LinkType::nlos) == r.h_nlos);
    }
    SUBCASE("directional receiver sensing") {
        auto r = avg_exclusion_radii(make_ctx(Protocol::dcsr));
        CHECK(r.h_los == doctest::Approx(306.561906).epsilon(1e-7));
        CHECK(r.h_nlos == doctest::Approx(8.337658).epsilon(1e-7));
        CHECK(r.d_los == 0.0);
    }
    SUBCASE("announcements add their own radii") {
        auto r = avg_exclusion_radii(make_ctx(Protocol::dcsra));
        CHECK(r.h_los == doctest::Approx(306.561906).epsilon(1e-7));
        CHECK(r.h_nlos == doctest::Approx(8.337658).epsilon(1e-7));
        CHECK(r.d_los == doctest::Approx(376.919439).epsilon(1e-7));
        CHECK(r.d_nlos == doctest::Approx(10.268026).epsilon(1e-7));
        CHECK(r.d(LinkType::los) == r.d_los);
    }
    SUBCASE("transmitter-side sensing has no receiver-centric radii") {
        CHECK_THROWS_AS(avg_exclusion_radii(make_ctx(Protocol::ocst)), std::invalid_argument);
        CHECK_THROWS_AS(avg_exclusion_radii(make_ctx(Protocol::dcst)), std::invalid_argument);
    }
}

TEST_CASE("mean contender counts") {
    CHECK(avg_contenders(make_ctx(Protocol::ocst)) == doctest::Approx(5.1242107925).epsilon(1e-8));
    CHECK(avg_contenders(make_ctx(Protocol::dcst)) == doctest::Approx(2.6576452693).epsilon(1e-8));
    CHECK(avg_contenders(make_ctx(Protocol::ocsr)) == doctest::Approx(4.1107739523).epsilon(1e-8));
    CHECK(avg_contenders(make_ctx(Protocol::dcsr)) == doctest::Approx(1.1496616420).epsilon(1e-8));
    CHECK(avg_contenders(make_ctx(Protocol::dcsra)) == doctest::Approx(5.9227159056).epsilon(1e-8));
    CHECK_THROWS_AS(avg_contenders(make_ctx(Protocol::non_cs)), std::invalid_argument);

    // announcement contenders count one UE per BS, so they ride on
    // lambda_1 + lambda_2 and do not depend on the sharing degree
    double ann_mid = avg_contenders(make_ctx(Protocol::dcsra, 0.5)) -
                     avg_contenders(make_ctx(Protocol::dcsr, 0.5));
    double ann_full = avg_contenders(make_ctx(Protocol::dcsra, 1.0)) -
                      avg_contenders(make_ctx(Protocol::dcsr, 1.0));
    CHECK(ann_mid == doctest::Approx(ann_full).epsilon(1e-10));
}

TEST_CASE("transmission probability fixed point") {
    CHECK(solve_transmission_probability(0.0) == doctest::Approx(1.0));
    CHECK(solve_transmission_probability(1.0) == doctest::Approx(0.5).epsilon(1e-10));
    // n = 2: p = (1-p)^2 has root (3 - sqrt(5))/2
    CHECK(solve_transmission_probability(2.0) ==
          doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-10));
    CHECK(solve_transmission_probability(1.1496616420) ==
          doctest::Approx(0.4758493456).epsilon(1e-8));

    // residual of the defining equation
    for (double n : {0.3, 1.0, 2.5, 6.0, 20.0}) {
        double p = solve_transmission_probability(n);
        CHECK(near(p, std::pow(1.0 - p, n), 1e-9));
    }

    // more contention, less airtime
    double prev = 1.0;
    for (double n : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        double p = solve_transmission_probability(n);
        CHECK(p < prev);
        prev = p;
    }
    CHECK_THROWS_AS(solve_transmission_probability(-1.0), std::invalid_argument);
}

TEST_CASE("interference Laplace transform") {
    auto ctx = make_ctx(Protocol::dcsr);
    auto radii = avg_exclusion_radii(ctx);
    double p_t = 0.4758493456;

    CHECK(laplace_interference(0.0, 100.0, LinkType::los, OperatorSet::shared, p_t, radii, ctx) ==
          doctest::Approx(1.0).epsilon(1e-9));
    // an idle network never attenuates
    CHECK(laplace_interference(1e9, 100.0, LinkType::los, OperatorSet::shared, 0.0, radii, ctx) ==
          doctest::Approx(1.0).epsilon(1e-9));

    double prev = 1.0;
    for (double s : {1e7, 1e8, 1e9, 1e10}) {
        double v =
            laplace_interference(s, 100.0, LinkType::los, OperatorSet::shared, p_t, radii, ctx);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }

    // carving out the carrier-sense disk can only help
    ExclusionRadii none;
    double guarded =
        laplace_interference(1e9, 100.0, LinkType::los, OperatorSet::shared, p_t, radii, ctx);
    double bare =
        laplace_interference(1e9, 100.0, LinkType::los, OperatorSet::shared, p_t, none, ctx);
    CHECK(guarded > bare);

    CHECK_THROWS_AS(laplace_interference(-1.0, 100.0, LinkType::los, OperatorSet::shared, p_t,
                                         radii, ctx),
                    std::invalid_argument);
    CHECK_THROWS_AS(laplace_interference(1.0, 100.0, LinkType::los, OperatorSet::op2_only, p_t,
                                         radii, ctx),
                    std::invalid_argument);
}

TEST_CASE("coverage probability at the reference point") {
    SUBCASE("always-on baseline") {
        auto ctx = make_ctx(Protocol::non_cs);
        auto r0 = coverage_probability(0.0, ctx);
        CHECK(r0.converged);
        CHECK(r0.p_t == doctest::Approx(1.0));
        CHECK(near(r0.p_c, 0.97667, 1e-4));
        CHECK(near(coverage_probability(30.0, ctx).p_c, 0.52577, 1e-4));
        CHECK(near(coverage_probability(55.0, ctx).p_c, 0.00887, 1e-4));
    }
    SUBCASE("quasi-omni receiver sensing") {
        auto ctx = make_ctx(Protocol::ocsr);
        auto r = coverage_probability(0.0, ctx);
        CHECK(r.p_t == doctest::Approx(0.2716751024).epsilon(1e-8));
        CHECK(near(r.p_c, 0.26865, 1e-4));
        CHECK(near(coverage_probability(40.0, ctx).p_c, 0.19876, 1e-4));
    }
    SUBCASE("directional receiver sensing") {
        auto ctx = make_ctx(Protocol::dcsr);
        auto r = coverage_probability(0.0, ctx);
        CHECK(r.p_t == doctest::Approx(0.4758493456).epsilon(1e-8));
        CHECK(near(r.p_c, 0.46942, 1e-4));
        CHECK(near(coverage_probability(35.0, ctx).p_c, 0.33557, 1e-4));
        CHECK(near(coverage_probability(55.0, ctx).p_c, 0.06095, 1e-4));
    }
    SUBCASE("announcements") {
        auto ctx = make_ctx(Protocol::dcsra);
        auto r = coverage_probability(0.0, ctx);
        CHECK(r.p_t == doctest::Approx(0.2235117113).epsilon(1e-8));
        CHECK(near(r.p_c, 0.22142, 1e-4));
        CHECK(near(coverage_probability(50.0, ctx).p_c, 0.13731, 1e-4));
        CHECK(near(coverage_probability(70.0, ctx).p_c, 0.00846, 1e-4));
    }
    SUBCASE("transmitter-side sensing is out of analytic reach") {
        CHECK_THROWS_AS(coverage_probability(0.0, make_ctx(Protocol::ocst)),
                        std::invalid_argument);
        CHECK_THROWS_AS(coverage_probability(0.0, make_ctx(Protocol::dcst)),
                        std::invalid_argument);
    }
}

TEST_CASE("coverage is monotone in the threshold and capped by the airtime") {
    for (auto p : {Protocol::non_cs, Protocol::ocsr, Protocol::dcsr, Protocol::dcsra}) {
        auto ctx = make_ctx(p);
        double prev = 1.0;
        for (double z : {-10.0, 10.0, 30.0, 50.0, 70.0}) {
            auto r = coverage_probability(z, ctx);
            CHECK(r.p_c <= prev + 1e-9);
            CHECK(r.p_c <= r.p_t + 1e-9);
            CHECK(r.p_c >= 0.0);
            prev = r.p_c;
        }
    }
}

TEST_CASE("denser sharing drains the always-on baseline") {
    // more co-located interferers, no protection: coverage at high Z must fall
    double prev = 1.0e9;
    for (double rho : {0.0, 0.5, 1.0}) {
        auto r = coverage_probability(55.0, make_ctx(Protocol::non_cs, rho));
        CHECK(r.p_c < prev);
        prev = r.p_c;
    }
    CHECK(near(coverage_probability(55.0, make_ctx(Protocol::non_cs, 0.0)).p_c, 0.012096, 1e-4));
    CHECK(near(coverage_probability(55.0, make_ctx(Protocol::non_cs, 1.0)).p_c, 0.005872, 1e-4));
}

TEST_CASE("a softer sensing threshold buys airtime") {
    double pt_prev = 0.0;
    for (double off : {5.0, 15.0, 25.0}) {
        auto r = coverage_probability(10.0, make_ctx(Protocol::dcsr, 0.5, off));
        CHECK(r.p_t > pt_prev);
        pt_prev = r.p_t;
    }
    CHECK(coverage_probability(10.0, make_ctx(Protocol::dcsr, 0.5, 5.0)).p_t ==
          doctest::Approx(0.286345376).epsilon(1e-7));
    CHECK(coverage_probability(10.0, make_ctx(Protocol::dcsr, 0.5, 25.0)).p_t ==
          doctest::Approx(0.641826767).epsilon(1e-7));
}

TEST_CASE("radial truncation stays close to the open-plane answer") {
    auto full = coverage_probability(0.0, make_ctx(Protocol::non_cs));
    auto ctx = make_ctx(Protocol::non_cs);
    ctx.quadrature.r_max_m = 2000.0;
    auto cut = coverage_probability(0.0, ctx);
    CHECK(cut.converged);
    CHECK(near(cut.p_c, full.p_c, 5e-3));
}
