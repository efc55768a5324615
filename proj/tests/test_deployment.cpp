#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mmcs/deployment.hpp"

using namespace mmcs;

TEST_CASE("operator membership") {
    CHECK(contains_operator(OperatorSet::op1_only, 1));
    CHECK_FALSE(contains_operator(OperatorSet::op1_only, 2));
    CHECK_FALSE(contains_operator(OperatorSet::op2_only, 1));
    CHECK(contains_operator(OperatorSet::op2_only, 2));
    CHECK(contains_operator(OperatorSet::shared, 1));
    CHECK(contains_operator(OperatorSet::shared, 2));
    CHECK_THROWS_AS(contains_operator(OperatorSet::shared, 3), std::invalid_argument);
    CHECK(std::string(to_string(OperatorSet::shared)) == "shared");
}

TEST_CASE("density decomposition at the reference point") {
    SharingModel m;  // 30 + 30, rho 0.5
    auto d = decompose_densities(m);
    CHECK(d.total == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(d.shared == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(d.excl_1 == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(d.excl_2 == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(d.a == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(d.of(OperatorSet::shared) == doctest::Approx(20.0));
    CHECK(d.of(OperatorSet::op1_only) == doctest::Approx(10.0));
    CHECK(d.of(OperatorSet::op2_only) == doctest::Approx(10.0));
}

TEST_CASE("density decomposition edge cases") {
    SharingModel none{30.0, 30.0, 0.0};
    auto d0 = decompose_densities(none);
    CHECK(d0.total == doctest::Approx(60.0));
    CHECK(d0.shared == doctest::Approx(0.0));

    SharingModel full{30.0, 30.0, 1.0};
    auto d1 = decompose_densities(full);
    CHECK(d1.total == doctest::Approx(30.0));
    CHECK(d1.shared == doctest::Approx(30.0));
    CHECK(d1.excl_1 == doctest::Approx(0.0));

    CHECK_THROWS_AS(decompose_densities({30.0, 30.0, 1.2}), std::invalid_argument);
    CHECK_THROWS_AS(decompose_densities({30.0, 30.0, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(decompose_densities({-1.0, 30.0, 0.5}), std::invalid_argument);
    // shared density would exceed the smaller operator
    CHECK_THROWS_AS(decompose_densities({10.0, 50.0, 0.5}), std::invalid_argument);
}

TEST_CASE("deployment sampling is deterministic in the seed") {
    SharingModel m;
    auto a = sample_deployment(m, 1000.0, 42);
    auto b = sample_deployment(m, 1000.0, 42);
    auto c = sample_deployment(m, 1000.0, 43);
    REQUIRE(a.sites.size() == b.sites.size());
    for (size_t i = 0; i < a.sites.size(); ++i) {
        CHECK(a.sites[i].x == b.sites[i].x);
        CHECK(a.sites[i].y == b.sites[i].y);
        CHECK(a.sites[i].operators == b.sites[i].operators);
    }
    bool different = c.sites.size() != a.sites.size();
    if (!different && !a.sites.empty()) different = a.sites[0].x != c.sites[0].x;
    CHECK(different);
    CHECK(a.region_radius == 1000.0);
    CHECK(a.seed == 42);
    CHECK_THROWS_AS(sample_deployment(m, 0.0, 1), std::invalid_argument);
}

TEST_CASE("per-process counts are Poisson with the decomposed densities") {
    SharingModel m;  // shared 20, excl 10 + 10 per km^2
    const double radius = 1000.0;
    const double area_km2 = M_PI;  // 1 km disk
    const int draws = 400;
    double n_sh = 0.0, n_e1 = 0.0, n_e2 = 0.0, v_sh = 0.0;
    for (int k = 0; k < draws; ++k) {
        auto d = sample_deployment(m, radius, 1000 + k);
        int sh = 0, e1 = 0, e2 = 0;
        for (const auto& s : d.sites) {
            if (s.operators == OperatorSet::shared) ++sh;
            else if (s.operators == OperatorSet::op1_only) ++e1;
            else ++e2;
        }
        n_sh += sh;
        n_e1 += e1;
        n_e2 += e2;
        v_sh += double(sh) * sh;
    }
    double mean_sh = n_sh / draws;
    double exp_sh = 20.0 * area_km2;
    double exp_e = 10.0 * area_km2;
    double se_sh = std::sqrt(exp_sh / draws);
    double se_e = std::sqrt(exp_e / draws);
    CHECK(std::abs(mean_sh - exp_sh) < 4.0 * se_sh);
    CHECK(std::abs(n_e1 / draws - exp_e) < 4.0 * se_e);
    CHECK(std::abs(n_e2 / draws - exp_e) < 4.0 * se_e);
    // Poisson: variance equals the mean
    double var_sh = v_sh / draws - mean_sh * mean_sh;
    CHECK(var_sh == doctest::Approx(exp_sh).epsilon(0.25));
}

TEST_CASE("points are uniform over the disk") {
    SharingModel m;
    double sr = 0.0;
    long n = 0;
    const double radius = 1000.0;
    for (int k = 0; k < 200; ++k) {
        auto d = sample_deployment(m, radius, 7000 + k);
        for (const auto& s : d.sites) {
            double r = s.distance_to_origin();
            CHECK(r <= radius * (1.0 + 1e-12));
            sr += r;
            ++n;
        }
    }
    // E[r] = 2R/3 for uniform points on a disk
    double se = radius * 0.236 / std::sqrt(double(n));  // sd of r is R sqrt(1/2 - 4/9)
    CHECK(std::abs(sr / n - 2.0 * radius / 3.0) < 4.0 * se);
}

TEST_CASE("realizations without an operator-1 site are redrawn") {
    // op1 almost never appears at this density, so the redraw path must fire
    SharingModel sparse{0.001, 30.0, 0.0};
    auto d = sample_deployment(sparse, 1000.0, 5);
    bool has_op1 = false;
    for (const auto& s : d.sites) has_op1 = has_op1 || contains_operator(s.operators, 1);
    CHECK(has_op1);
    CHECK(d.resample_count > 0);

    // at the reference density a redraw is essentially impossible
    auto dense = sample_deployment(SharingModel{}, 2000.0, 5);
    CHECK(dense.resample_count == 0);
}

TEST_CASE("operator views partition the deployment") {
    auto d = sample_deployment(SharingModel{}, 1000.0, 99);
    auto v1 = operator_view(d, 1);
    auto v2 = operator_view(d, 2);
    for (int i : v1) CHECK(contains_operator(d.sites[i].operators, 1));
    for (int i : v2) CHECK(contains_operator(d.sites[i].operators, 2));
    size_t shared = 0, total = 0;
    for (const auto& s : d.sites) {
        total += 1;
        if (s.operators == OperatorSet::shared) ++shared;
    }
    CHECK(v1.size() + v2.size() == total + shared);
}

TEST_CASE("jsonl round trip") {
    auto d = sample_deployment(SharingModel{}, 1500.0, 123);
    std::string path = "deployment_roundtrip_test.jsonl";
    dump_jsonl(d, path);
    auto back = load_jsonl(path);
    std::remove(path.c_str());

    CHECK(back.region_radius == doctest::Approx(d.region_radius));
    CHECK(back.seed == d.seed);
    CHECK(back.resample_count == d.resample_count);
    REQUIRE(back.sites.size() == d.sites.size());
    for (size_t i = 0; i < d.sites.size(); ++i) {
        CHECK(back.sites[i].x == doctest::Approx(d.sites[i].x).epsilon(1e-12));
        CHECK(back.sites[i].y == doctest::Approx(d.sites[i].y).epsilon(1e-12));
        CHECK(back.sites[i].operators == d.sites[i].operators);
    }
    CHECK_THROWS(load_jsonl("no_such_file.jsonl"));
}

TEST_CASE("site distance helpers") {
    Site s{3.0, 4.0, OperatorSet::op1_only};
    CHECK(s.distance_to_origin() == doctest::Approx(5.0));
    CHECK(s.distance_to(3.0, 0.0) == doctest::Approx(4.0));
}
