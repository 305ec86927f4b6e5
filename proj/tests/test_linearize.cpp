#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conj1d/linearize.hpp"

using namespace conj1d;
using exact::BigRational;

namespace {

Params params(std::initializer_list<std::pair<const char*, const char*>> kv) {
    Params p;
    for (auto& [k, v] : kv) p[k] = BigRational::parse(v);
    return p;
}

Map1D rational_map(const std::string& num, const std::string& dom) {
    return parse_map_spec(R"({"rational": {"num": )" + num + R"(}, "domain": )" + dom + "}");
}

} // namespace

TEST_CASE("koenigs chart of a linear map is the identity") {
    Map1D lin = catalog_make("linear", params({{"lambda", "1/2"}}));
    LinearizationChart chart = koenigs(lin, 0.0);
    LinearizationChart big = extend_basin(chart, Interval::open(-1, 1), lin);
    for (double x : {-0.9, -0.3, 1e-4, 0.47, 0.88})
        CHECK(std::fabs(big.eval(x) - x) < 1e-12);
    CHECK(big.schroder_residual() < 1e-12);
}

TEST_CASE("koenigs chart at an attracting fixed point") {
    // f = x/2 + x^2, attracting at 0 with lambda = 1/2
    Map1D f = rational_map("[\"0\",\"1/2\",\"1\"]", "[-10, 10]");
    LinearizationChart chart = koenigs(f, 0.0);
    CHECK(chart.lambda() == doctest::Approx(0.5).epsilon(1e-14));
    LinearizationChart ext = extend_basin(chart, Interval::open(-0.2, 0.2), f);
    CHECK(ext.schroder_residual(200) < 1e-10);

    // normalization phi(0) = 0, phi'(0) = 1 via centered difference
    double h = 1e-6;
    CHECK(std::fabs(ext.eval(0.0)) < 1e-13);
    CHECK((ext.eval(h) - ext.eval(-h)) / (2 * h) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("koenigs chart at a repelling fixed point uses the inverse branch") {
    // f = 2x + x^2, repelling at 0 with lambda = 2
    Map1D f = rational_map("[\"0\",\"2\",\"1\"]", "[-10, 10]");
    LinearizationChart chart = koenigs(f, 0.0);
    CHECK(chart.repelling());
    LinearizationChart ext = extend_basin(chart, Interval::open(-0.5, 0.5), f);
    CHECK(ext.schroder_residual(200) < 1e-10);
    double h = 1e-6;
    CHECK((ext.eval(h) - ext.eval(-h)) / (2 * h) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("koenigs handles an orientation-reversing fixed point") {
    // f = -x/2 + x^2: lambda = -1/2
    Map1D f = rational_map("[\"0\",\"-1/2\",\"1\"]", "[-10, 10]");
    LinearizationChart chart = koenigs(f, 0.0);
    CHECK(chart.lambda() == doctest::Approx(-0.5).epsilon(1e-14));
    LinearizationChart ext = extend_basin(chart, Interval::open(-0.15, 0.15), f);
    CHECK(ext.schroder_residual(200) < 1e-10);
}

TEST_CASE("koenigs rejects nonhyperbolic and superattracting points") {
    Map1D tangent = rational_map("[\"0\",\"1\",\"1\"]", "[-10, 10]"); // f'(0) = 1
    CHECK_THROWS_AS(koenigs(tangent, 0.0), Error);
    Map1D super = rational_map("[\"0\",\"0\",\"1\"]", "[-10, 10]"); // f'(0) = 0
    CHECK_THROWS_AS(koenigs(super, 0.0), Error);
    Map1D lin = catalog_make("linear", params({{"lambda", "1/2"}}));
    CHECK_THROWS_AS(koenigs(lin, 0.5), Error); // not a fixed point
}

TEST_CASE("basin extension in the increasing-interval configuration") {
    // f = x - c x + c x^3 on [-1,1]: fixed points -1, 0, 1; attracting 0
    Map1D f = rational_map("[\"0\",\"1/2\",\"0\",\"1/2\"]", "[-1, 1]");
    LinearizationChart core = koenigs(f, 0.0);
    LinearizationChart ext = extend_basin(core, Interval::open(-1, 1), f);
    CHECK(ext.schroder_residual(200) < 1e-9);

    // extension agrees with the core chart on the core
    for (double x : {-0.01, -0.002, 0.004, 0.015})
        CHECK(std::fabs(ext.eval(x) - core.eval(x)) < 1e-12 * (1 + std::fabs(core.eval(x))));

    // monotone on the basin
    double prev = ext.eval(-0.95);
    for (int i = 1; i <= 60; ++i) {
        double x = -0.95 + 1.9 * i / 60;
        double v = ext.eval(x);
        CHECK(v > prev);
        prev = v;
    }

    // interior extra fixed point is refused
    CHECK_THROWS_AS(extend_basin(core, Interval::open(-1, 1.5), rational_map(
        "[\"0\",\"1/2\",\"0\",\"1/2\"]", "[-2, 2]")), Error);
}

TEST_CASE("build_conjugacy of a map with itself is the identity") {
    Map1D f = rational_map("[\"0\",\"1/2\",\"1\"]", "[-10, 10]");
    Pairing pairing{0.0, 0.0, std::nullopt};
    ConjugacyOptions opt;
    opt.basin_f = Interval::open(-0.2, 0.3);
    opt.basin_g = Interval::open(-0.2, 0.3);
    ConjugacyTable table = build_conjugacy(f, f, pairing, opt);
    CHECK(table.residual_sup < 1e-11);
    for (size_t i = 0; i < table.xs.size(); ++i)
        CHECK(std::fabs(table.hs[i] - table.xs[i]) < 2e-11 * (1 + std::fabs(table.xs[i])));
    CHECK(table.residual_sup == doctest::Approx(table_residual(table, f, f)).epsilon(1e-12));
}

TEST_CASE("conjugating to the linearization recovers the chart") {
    Map1D f = rational_map("[\"0\",\"1/2\",\"1\"]", "[-10, 10]");
    Map1D g = catalog_make("linear", params({{"lambda", "1/2"}}));
    Pairing pairing{0.0, 0.0, std::nullopt};
    ConjugacyOptions opt;
    opt.basin_f = Interval::open(-0.2, 0.3);
    opt.basin_g = Interval::open(-1, 1);
    ConjugacyTable table = build_conjugacy(f, g, pairing, opt);
    CHECK(table.residual_sup < 1e-10);

    LinearizationChart phi = extend_basin(koenigs(f, 0.0), Interval::open(-0.2, 0.3), f);
    for (size_t i = 0; i < table.xs.size(); i += 50)
        CHECK(std::fabs(table.hs[i] - phi.eval(table.xs[i])) < 1e-10);
}

TEST_CASE("multiplier mismatch is refused") {
    Map1D f = rational_map("[\"0\",\"1/2\",\"1\"]", "[-10, 10]");
    Map1D g = catalog_make("linear", params({{"lambda", "3/5"}}));
    CHECK_THROWS_AS(build_conjugacy(f, g, Pairing{0.0, 0.0, std::nullopt}, {}), Error);
}

TEST_CASE("marked pairing pins h(x0) = y0 and composition coherence holds") {
    Map1D f = rational_map("[\"0\",\"1/2\",\"1\"]", "[-10, 10]");
    Map1D g = rational_map("[\"0\",\"1/2\",\"0\",\"1\"]", "[-10, 10]"); // y/2 + y^3
    Pairing fg{0.0, 0.0, std::make_pair(0.1, 0.12)};
    ConjugacyOptions opt;
    opt.basin_f = Interval::open(-0.2, 0.3);
    opt.basin_g = Interval::open(-0.3, 0.3);
    ConjugacyTable t_fg = build_conjugacy(f, g, fg, opt);
    CHECK(t_fg.h_at(0.1) == doctest::Approx(0.12).epsilon(1e-9));

    Pairing gf{0.0, 0.0, std::make_pair(0.12, 0.1)};
    ConjugacyOptions opt2;
    opt2.basin_f = Interval::open(-0.3, 0.3);
    opt2.basin_g = Interval::open(-0.2, 0.3);
    ConjugacyTable t_gf = build_conjugacy(g, f, gf, opt2);

    for (double x : {-0.15, -0.05, 0.02, 0.1, 0.2}) {
        double y = t_fg.h_at(x);
        if (y < t_gf.xs.front() || y > t_gf.xs.back()) continue;
        CHECK(std::fabs(t_gf.h_at(y) - x) < 1e-7);
    }

    CHECK_THROWS_AS(build_conjugacy(f, g, Pairing{0.0, 0.0, std::make_pair(5.0, 0.1)}, opt), Error);
}

TEST_CASE("multiplier transport across a conjugacy table") {
    Map1D f = rational_map("[\"0\",\"1/2\",\"1\"]", "[-10, 10]");
    Map1D g = rational_map("[\"0\",\"1/2\",\"0\",\"1\"]", "[-10, 10]");
    ConjugacyOptions opt;
    opt.basin_f = Interval::open(-0.2, 0.3);
    opt.basin_g = Interval::open(-0.3, 0.3);
    ConjugacyTable table = build_conjugacy(f, g, Pairing{0.0, 0.0, std::nullopt}, opt);
    TransportCheck tc = check_multiplier_transport(table, f, g);
    CHECK(tc.fixed_points_checked >= 1);
    CHECK(tc.max_fixed_point_error < 1e-8);
    CHECK(tc.max_multiplier_error < 1e-6);
}

TEST_CASE("finite-difference weights reproduce derivatives of a cubic") {
    std::vector<double> nodes = {0.0, 0.013, 0.029, 0.041};
    auto f = [](double x) { return 2.0 + 3.0 * x - x * x + 0.5 * x * x * x; };
    auto w1 = fd_weights(0.0, nodes, 1);
    double d1 = 0;
    for (size_t i = 0; i < nodes.size(); ++i) d1 += w1[i] * f(nodes[i]);
    CHECK(d1 == doctest::Approx(3.0).epsilon(1e-9)); // exact for cubics

    std::vector<double> nodes5 = {0.0, 0.01, 0.022, 0.031, 0.045};
    auto w2 = fd_weights(0.0, nodes5, 2);
    double d2 = 0;
    for (size_t i = 0; i < nodes5.size(); ++i) d2 += w2[i] * f(nodes5[i]);
    CHECK(d2 == doctest::Approx(-2.0).epsilon(1e-8));
}

TEST_CASE("kink extension of a piecewise map against itself is the identity") {
    Map1D fq = catalog_make("skew-quad", params({{"nu", "1/1000"}, {"sl", "2"}, {"sr", "1/2"}, {"t", "1"}}));
    const auto& pw = std::get<PiecewiseMap1D>(fq);
    double x_r = 0.002; // nu / (1 - sr)
    Pairing pairing{x_r, x_r, std::make_pair(0.0, 0.0)};
    ConjugacyOptions opt;
    opt.grid_n = 1500;
    opt.domain_f = Interval::closed(0.0, 0.004);
    ConjugacyTable right = build_conjugacy(fq, fq, pairing, opt);
    CHECK(right.residual_sup < 1e-12);

    ConjugacyTable full = extend_across_kink(right, pw, pw);
    REQUIRE(full.junctions.size() == 1);
    CHECK(full.xs[full.junctions[0]] == 0.0);
    for (size_t i = 0; i < full.xs.size(); i += 100)
        CHECK(std::fabs(full.hs[i] - full.xs[i]) < 1e-10);

    SmoothnessReport rep = smoothness_report(full, fq, fq, 0.0);
    CHECK(rep.left_deriv == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(rep.right_deriv == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(rep.match_error < 1e-6);
}

TEST_CASE("unequal slope ratios break differentiability at the kink") {
    double mu = 1e-3;
    Map1D f = catalog_make("skew-quad", params({{"nu", "1/1000"}, {"sl", "2"}, {"sr", "1/2"}, {"t", "1"}}));
    Map1D g = catalog_make("skew-quad", params({{"nu", "1/1000"}, {"sl", "3"}, {"sr", "1/2"}, {"t", "1"}}));
    const auto& fp = std::get<PiecewiseMap1D>(f);
    const auto& gp = std::get<PiecewiseMap1D>(g);
    CHECK(slope_ratio(fp) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(slope_ratio(gp) == doctest::Approx(6.0).epsilon(1e-14));

    double x_r = 2 * mu; // right fixed point of both maps (same right branch)
    Pairing pairing{x_r, x_r, std::make_pair(0.0, 0.0)};
    ConjugacyOptions opt;
    opt.grid_n = 1500;
    opt.domain_f = Interval::closed(0.0, 0.004);
    ConjugacyTable right = build_conjugacy(f, g, pairing, opt);
    ConjugacyTable full = extend_across_kink(right, fp, gp);

    SmoothnessReport rep = smoothness_report(full, f, g, 0.0);
    // predicted one-sided ratio: S_f / S_g = 4/6 = 2/3
    CHECK(rep.left_deriv / rep.right_deriv == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
    CHECK(rep.match_error > 0.1);
}

TEST_CASE("slope ratio of a smooth map ingested as piecewise is 1") {
    // same branch twice, kink at 0 is invisible
    Map1D m = parse_map_spec(
        R"({"piecewise": {"left": {"num": ["1/100","3/2","1"]}, "right": {"num": ["1/100","3/2","1"]}}})");
    CHECK(slope_ratio(std::get<PiecewiseMap1D>(m)) == 1.0);

    // quadratic term does not move the slope ratio at 0
    for (const char* t : {"0", "1", "-2"}) {
        Map1D sq = catalog_make("skew-quad", params({{"nu", "1/100"}, {"sl", "2"}, {"sr", "1/2"}, {"t", t}}));
        CHECK(slope_ratio(std::get<PiecewiseMap1D>(sq)) == doctest::Approx(4.0).epsilon(1e-14));
    }
}

TEST_CASE("smoothness report rejects off-grid and near-edge locations") {
    Map1D f = rational_map("[\"0\",\"1/2\",\"1\"]", "[-10, 10]");
    ConjugacyOptions opt;
    opt.basin_f = Interval::open(-0.2, 0.3);
    opt.basin_g = Interval::open(-0.2, 0.3);
    ConjugacyTable table = build_conjugacy(f, f, Pairing{0.0, 0.0, std::nullopt}, opt);
    CHECK_THROWS_AS(smoothness_report(table, f, f, table.xs[2]), Error);           // too near edge
    CHECK_THROWS_AS(smoothness_report(table, f, f, 0.5 * (table.xs[40] + table.xs[41])), Error);

    SmoothnessReport rep = smoothness_report(table, f, f, table.xs[table.xs.size() / 2]);
    CHECK(rep.match_error < 1e-9);
}
