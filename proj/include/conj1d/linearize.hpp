#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conj1d/maps.hpp"
#include "conj1d/orbits.hpp"

namespace conj1d {

// Linearizing coordinate phi at a hyperbolic fixed point: phi(f(x)) = lambda phi(x),
// normalized so phi(x*) = 0, phi'(x*) = 1. Evaluation walks the orbit into a
// small core around x* (by f for attracting points, by the local inverse
// branch for repelling ones) and takes the scaled limit there.
class LinearizationChart {
public:
    LinearizationChart() = default;

    double x_star() const { return x_star_; }
    double lambda() const { return lambda_; }
    double core_radius() const { return core_radius_; }
    const Interval& basin() const { return basin_; }
    bool repelling() const { return repelling_; }

    // phi(x); x must be interior to the basin (1e-12 exclusion zone)
    double eval(double x) const;
    // phi^{-1}(target) by bracketing + secant on the monotone sampler
    double inverse(double target) const;
    double inverse(double target, double guess) const;

    // max over samples of |phi(f(x)) - lambda phi(x)| / (1 + |phi(x)|)
    double schroder_residual(int samples = 200) const;

    friend LinearizationChart koenigs(const Map1D& map, double x_star, double tol);
    friend LinearizationChart extend_basin(const LinearizationChart& chart, const Interval& basin,
                                           const Map1D& map);

private:
    Map1D map_;
    double x_star_ = 0, lambda_ = 0, core_radius_ = 0, tol_ = 1e-13;
    Interval basin_;
    bool repelling_ = false;
    // Taylor-shifted local model F(u) = mnum(u)/mden(u) with mnum(0) = 0,
    // representing f(x* + u) - x* without the catastrophic cancellation a
    // direct evaluation suffers as u -> 0. Built exactly from the map's
    // exact rational form when it has one.
    DPoly mnum_, mden_, mnum_d_, mden_d_;

    double model_f(double u) const;
    double model_inverse(double t) const;
    double core_limit(double z) const;
    double local_inverse(double y) const;
};

// Local Koenigs/Sternberg chart at a hyperbolic, non-superattracting fixed
// point. tol controls the Cauchy cutoff of the scaled limit.
LinearizationChart koenigs(const Map1D& map, double x_star, double tol = 1e-13);

// Extends the chart to the whole open basin (endpoints must be fixed points
// or domain ends; no interior fixed points besides x_star).
LinearizationChart extend_basin(const LinearizationChart& chart, const Interval& basin,
                                const Map1D& map);

// Basin of attraction/repulsion of x_star, bounded by the neighboring fixed
// points found in the search window (window defaults to domain clipped to
// x_star +- 1).
Interval basin_of(const Map1D& map, double x_star, std::optional<Interval> search = std::nullopt);

struct SmoothnessReport {
    double left_deriv = 0;
    double right_deriv = 0;
    double match_error = 0;      // |left - right| / max(1, |right|)
    double second_deriv_jump = 0;
    double location = 0;
};

// Sampled conjugating function h with h(f(x)) = g(h(x)) on its grid.
struct ConjugacyTable {
    std::vector<double> xs; // strictly increasing
    std::vector<double> hs; // strictly monotone
    std::vector<size_t> junctions;
    double residual_sup = 0;
    std::string pairing;

    bool increasing() const { return hs.size() < 2 || hs.back() > hs.front(); }
    double h_at(double x) const; // monotone cubic (Fritsch-Carlson) interpolation
    void rebuild_slopes();       // call after mutating xs/hs

private:
    std::vector<double> slopes_;
};

// max_i |h(f(x_i)) - g(h(x_i))| over grid points whose image stays inside
// the table range, h interpolated from the stored table
double table_residual(const ConjugacyTable& table, const Map1D& f, const Map1D& g);

struct Pairing {
    double x_star = 0;
    double y_star = 0;
    std::optional<std::pair<double, double>> marked; // forces h(x0) = y0
};

struct ConjugacyOptions {
    int grid_n = 2001;
    double collar = -1;                       // boundary exclusion; < 0 = 1e-3 of each side
    std::optional<Interval> domain_f;         // explicit table domain (else basin of x_star)
    std::optional<Interval> basin_f, basin_g; // basin overrides
    double chart_tol = 1e-13;
    // cosine-graded grid: packs nodes near the domain ends, where h loses
    // smoothness when the far boundary multipliers are unmatched
    bool cosine_grid = false;
};

// h = phi_g^{-1}(c phi_f) with c = 1, or fixed by the marked pair. Refuses
// pairings whose multipliers differ by more than 1e-8 (no differentiable
// conjugacy exists then).
ConjugacyTable build_conjugacy(const Map1D& f, const Map1D& g, const Pairing& pairing,
                               const ConjugacyOptions& opt = {});

// Extends a table built on [0, ...) with h(0) = 0 across the kink of
// piecewise maps via h(x) = g_L^{-1}(h(f_L(x))), recording the stitch index.
ConjugacyTable extend_across_kink(const ConjugacyTable& h_right, const PiecewiseMap1D& f,
                                  const PiecewiseMap1D& g);

// f_L'(0) / f_R'(0); errors out when either one-sided slope vanishes.
double slope_ratio(const PiecewiseMap1D& map);

// One-sided derivative comparison of h at an interior grid location, from
// 4-point (first derivative) and 5-point (second derivative) one-sided
// stencils on the table grid.
SmoothnessReport smoothness_report(const ConjugacyTable& table, const Map1D& f, const Map1D& g,
                                   double location);

struct TransportCheck {
    double max_fixed_point_error = 0; // |g(h(x*)) - h(x*)|
    double max_multiplier_error = 0;  // |f'(x*) - g'(h(x*))|
    int fixed_points_checked = 0;
};

// Conjugacy transport of multipliers across a table (the necessary condition
// a differentiable conjugacy must satisfy at every interior fixed point).
TransportCheck check_multiplier_transport(const ConjugacyTable& table, const Map1D& f,
                                          const Map1D& g);

// Finite-difference weights on arbitrary nodes (Fornberg); weights[i] gives
// the coefficient of values[i] approximating the m-th derivative at x0.
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int m);

} // namespace conj1d
