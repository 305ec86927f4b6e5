#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conj1d/normal_forms.hpp"
#include "conj1d/orbits.hpp"

using namespace conj1d;
using exact::BigRational;

namespace {

Params params(std::initializer_list<std::pair<const char*, const char*>> kv) {
    Params p;
    for (auto& [k, v] : kv) p[k] = BigRational::parse(v);
    return p;
}

MapFamily truncated_sn() { return family_in_mu("saddle-node", {}, "nu"); }
MapFamily cubic_sn() { return family_in_mu("saddle-node", params({{"a", "1"}}), "nu"); }
MapFamily bc_example() {
    // f_L = mu + 2x + x^2, f_R = mu + x/2
    return family_in_mu("skew-quad", params({{"sl", "2"}, {"sr", "1/2"}, {"t", "1"}}), "nu");
}

} // namespace

TEST_CASE("saddle-node assumption check and the G(0) formula") {
    SNAssumptions chk = check_sn_assumptions(cubic_sn());
    CHECK_FALSE(chk.flipped_x);
    CHECK_FALSE(chk.flipped_mu);
    CHECK(chk.fx == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(chk.fmu == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(chk.fxx == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(chk.fxxx == doctest::Approx(6.0).epsilon(1e-12));
    // G(0) = 2 fxxx / (3 fxx^2) = 12/12 = 1
    CHECK(chk.g0 == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sign normalization flips are reported") {
    // f = y + mu + y^2 needs both substitutions
    std::string spec = "{\"rational\": {\"num\": [\"MU\", \"1\", \"1\"]}}";
    MapFamily fam;
    fam.label = "wrong-sign-quadratic";
    fam.member = [](double mu) {
        Params p;
        p["nu"] = BigRational::from_double(-mu); // y + (-mu)... realized via catalog
        return catalog_make("saddle-node", p);   // y + nu - y^2
    };
    // f(y, mu) = y - mu - y^2: fmu < 0, fxx < 0: only the mu flip fires
    SNAssumptions chk = check_sn_assumptions(fam);
    CHECK_FALSE(chk.flipped_x);
    CHECK(chk.flipped_mu);
    CHECK(chk.fmu > 0);
    CHECK(chk.fxx < 0);
}

TEST_CASE("sn_multipliers on the truncated normal form") {
    SNMultipliers m = sn_multipliers(truncated_sn(), 0.01);
    // 1 +- 2 sqrt(mu) exactly for y + mu - y^2
    CHECK(m.lambda_plus == doctest::Approx(1.2).epsilon(1e-10));
    CHECK(m.lambda_minus == doctest::Approx(0.8).epsilon(1e-10));
    CHECK(m.x_plus == doctest::Approx(-0.1).epsilon(1e-9));
    CHECK(m.x_minus == doctest::Approx(0.1).epsilon(1e-9));

    CHECK_THROWS_AS(sn_multipliers(truncated_sn(), 0.0), Error);
    CHECK_THROWS_AS(sn_multipliers(truncated_sn(), -0.01), Error);
}

TEST_CASE("sn_multipliers track the asymptotic series") {
    for (double mu : {1e-4, 1e-5}) {
        SNMultipliers m = sn_multipliers(cubic_sn(), mu);
        // series: 1 +- 2 sqrt(mu) + 2 mu (G(0) = 1 for this family)
        double tail = 10.0 * std::pow(mu, 1.5);
        CHECK(std::fabs(m.lambda_plus - m.series_plus) < tail);
        CHECK(std::fabs(m.lambda_minus - m.series_minus) < tail);
        CHECK(m.series_plus == doctest::Approx(1 + 2 * std::sqrt(mu) + 2 * mu).epsilon(1e-12));
    }
}

TEST_CASE("sn_fit is a fixed point on the truncated normal form") {
    for (double mu : {0.05, 0.01, 1e-3, 1e-4}) {
        SNFit fit = sn_fit(truncated_sn(), mu);
        CHECK(std::fabs(fit.nu - mu) < 1e-12);
        CHECK(std::fabs(fit.a) < 1e-9);
        CHECK(fit.multiplier_residual < 1e-10);
    }
}

TEST_CASE("sn_fit on the cubic family extrapolates to G(0) = 1") {
    SNFit f1 = sn_fit(cubic_sn(), 1e-2);
    SNFit f2 = sn_fit(cubic_sn(), 1e-3);
    SNFit f3 = sn_fit(cubic_sn(), 1e-4);
    CHECK(f1.multiplier_residual < 1e-10);
    CHECK(f2.multiplier_residual < 1e-10);
    CHECK(f3.multiplier_residual < 1e-10);
    double g0 = aitken_extrapolate(f1.a, f2.a, f3.a);
    CHECK(std::fabs(g0 - 1.0) < 0.05);

    // fitted parameters re-produce the target multipliers
    SNMultipliers want = sn_multipliers(cubic_sn(), 1e-3);
    Params p;
    p["nu"] = BigRational::from_double(f2.nu);
    p["a"] = BigRational::from_double(f2.a);
    Map1D g = catalog_make("saddle-node", p);
    auto fps = find_fixed_points(g, Interval::closed(-0.2, 0.2), 512);
    REQUIRE(fps.size() == 2);
    CHECK(std::fabs(fps[0].multiplier - want.lambda_plus) < 2e-10);
    CHECK(std::fabs(fps[1].multiplier - want.lambda_minus) < 2e-10);
}

TEST_CASE("fits vary continuously in mu") {
    double prev_a = sn_fit(cubic_sn(), 1e-3).a;
    for (double mu : {1.01e-3, 1.0201e-3}) {
        double a = sn_fit(cubic_sn(), mu).a;
        CHECK(std::fabs(a - prev_a) < 0.1 * std::fabs(prev_a)); // 1% step, factor-10 slack
        prev_a = a;
    }
}

TEST_CASE("pf_fit on the truncated pitchfork form") {
    MapFamily trunc = family_in_mu("pitchfork", {}, "nu");
    for (double mu : {1e-2, 1e-3}) {
        PFFit fit = pf_fit(trunc, mu);
        CHECK(std::fabs(fit.nu - mu) < 1e-10);
        CHECK(std::fabs(fit.a) < 1e-7);
        CHECK(std::fabs(fit.b) < 1e-7);
        CHECK(fit.residual < 1e-10);
    }
}

TEST_CASE("pf_fit recovers the quintic coefficient") {
    MapFamily fam = family_in_mu("pitchfork", params({{"a", "1"}}), "nu");
    PFFit f1 = pf_fit(fam, 1e-2);
    PFFit f2 = pf_fit(fam, 1e-3);
    PFFit f3 = pf_fit(fam, 1e-4);
    double a0 = aitken_extrapolate(f1.a, f2.a, f3.a);
    CHECK(std::fabs(a0 - 1.0) < 0.05);
    CHECK(f3.residual < 1e-10);
}

TEST_CASE("pf_fit recovers the asymmetric quadratic coefficient") {
    MapFamily fam = family_in_mu("pitchfork", params({{"b", "1/2"}}), "nu");
    PFFit f1 = pf_fit(fam, 1e-2);
    PFFit f2 = pf_fit(fam, 1e-3);
    PFFit f3 = pf_fit(fam, 1e-4);
    double b0 = aitken_extrapolate(f1.b, f2.b, f3.b);
    CHECK(std::fabs(b0 - 0.5) < 0.05);
}

TEST_CASE("bc assumption check and the limit value for t") {
    BCAssumptions chk = check_bc_assumptions(bc_example());
    CHECK(chk.a_L == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(chk.a_R == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(chk.beta == doctest::Approx(1.0).epsilon(1e-8));
    // G(0) = (beta/2)(fxx_L - [a_L(1-a_L)/(a_R(1-a_R))] fxx_R) = (1/2)(2 - 0) = 1
    CHECK(chk.g0 == doctest::Approx(1.0).epsilon(1e-8));

    MapFamily bad = family_in_mu("skew-quad", params({{"sl", "1/2"}, {"sr", "1/4"}, {"t", "0"}}), "nu");
    CHECK_THROWS_WITH_AS(check_bc_assumptions(bad), doctest::Contains("a_L"), Error);
}

TEST_CASE("bc_multipliers on the quadratic example and the skew tent") {
    double mu = 1e-3;
    BCMultipliers m = bc_multipliers(bc_example(), mu);
    CHECK(m.lambda_R == 0.5); // right branch is linear: exactly s_R
    CHECK(m.slope_ratio == doctest::Approx(4.0).epsilon(1e-12));
    double x_l = (-1.0 + std::sqrt(1.0 - 4 * mu)) / 2.0;
    CHECK(m.x_L == doctest::Approx(x_l).epsilon(1e-9));
    CHECK(m.lambda_L == doctest::Approx(2.0 + 2.0 * x_l).epsilon(1e-9));

    MapFamily tent = family_in_mu("skew-tent", params({{"sl", "2"}, {"sr", "1/2"}}), "nu");
    for (double m2 : {1e-2, 1e-3, 1e-4}) {
        BCMultipliers t = bc_multipliers(tent, m2);
        CHECK(t.lambda_L == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(t.lambda_R == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(t.slope_ratio == doctest::Approx(4.0).epsilon(1e-12));
    }

    CHECK_THROWS_AS(bc_multipliers(bc_example(), -1e-3), Error);
    CHECK_THROWS_AS(bc_multipliers(bc_example(), 0.0), Error);
}

TEST_CASE("bc_fit reproduces the skew tent exactly and fits t on the example") {
    MapFamily tent = family_in_mu("skew-tent", params({{"sl", "2"}, {"sr", "1/2"}}), "nu");
    BCFit tf = bc_fit(tent, 1e-3);
    CHECK(tf.s_R == 0.5);
    CHECK(tf.s_L == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::fabs(tf.t) < 1e-9);

    BCFit f1 = bc_fit(bc_example(), 1e-2);
    BCFit f2 = bc_fit(bc_example(), 1e-3);
    BCFit f3 = bc_fit(bc_example(), 1e-4);
    for (const auto& f : {f1, f2, f3}) {
        CHECK(f.s_R == 0.5);
        CHECK(f.s_L == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(f.residual_L < 1e-10);
        CHECK(f.residual_slope < 1e-12);
    }
    double t0 = aitken_extrapolate(f1.t, f2.t, f3.t);
    CHECK(std::fabs(t0 - 1.0) < 0.05);

    // fitted form really has the target left multiplier
    BCMultipliers want = bc_multipliers(bc_example(), 1e-3);
    Params p = params({{"sl", "2"}, {"sr", "1/2"}});
    p["nu"] = BigRational::from_double(1e-3);
    p["t"] = BigRational::from_double(f2.t);
    Map1D g = catalog_make("skew-quad", p);
    auto fps = find_fixed_points(g, Interval::closed(-0.1, 0.1), 512);
    REQUIRE(fps.size() == 2);
    CHECK(std::fabs(fps[0].multiplier - want.lambda_L) < 1e-9);
}

TEST_CASE("aitken extrapolation is exact on geometric decay") {
    // v_k = 3 + c r^k
    double c = 0.7, r = 0.31;
    CHECK(aitken_extrapolate(3 + c, 3 + c * r, 3 + c * r * r) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sn_fit on a family genuinely outside the extended form") {
    // f = x + mu - x^2 + x^3 + x^4: the quartic term forces a real fit
    MapFamily fam;
    fam.label = "quartic-sn";
    fam.member = [](double mu) {
        Params p;
        std::vector<exact::BigRational> c = {exact::BigRational::from_double(mu),
                                             exact::BigRational(1), exact::BigRational(-1),
                                             exact::BigRational(1), exact::BigRational(1)};
        exact::RationalFn f(exact::Poly(std::move(c)), exact::Poly::constant(exact::BigRational(1)));
        return Map1D{SmoothMap1D(RatFnD::from_exact(f), Interval::all(), "quartic-sn", f)};
    };
    SNAssumptions chk = check_sn_assumptions(fam);
    CHECK(chk.g0 == doctest::Approx(1.0).epsilon(1e-8)); // quartic term invisible in G(0)

    SNFit f1 = sn_fit(fam, 1e-2);
    SNFit f2 = sn_fit(fam, 1e-3);
    SNFit f3 = sn_fit(fam, 1e-4);
    CHECK(f3.multiplier_residual < 1e-10);
    // finite-mu fits differ from the limit, the ladder extrapolates to it
    CHECK(std::fabs(f1.a - 1.0) > 1e-3);
    CHECK(std::fabs(aitken_extrapolate(f1.a, f2.a, f3.a) - 1.0) < 0.05);
}
