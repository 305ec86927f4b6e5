#pragma once

#include <string>
#include <vector>

#include "conj1d/maps.hpp"

namespace conj1d {

enum class Stability { attracting, repelling, nonhyperbolic };

const char* stability_name(Stability s);

struct FixedPointInfo {
    double x_star = 0;
    double multiplier = 0;
    Stability stability = Stability::nonhyperbolic;
};

// Brackets every sign change of f(x) - x on a grid over window (intersected
// with the map domain), refines by bisection + Newton polish. Grid nodes at
// poles are skipped; tangential fixed points that do not cross can be missed.
std::vector<FixedPointInfo> find_fixed_points(const Map1D& map, const Interval& window, int grid_n);

// Product of first derivatives along an orbit; rejects point lists that do
// not close up under the map (tolerance 1e-8, scale-relative).
double orbit_multiplier(const Map1D& map, const std::vector<double>& points);

struct PeriodicOrbit {
    std::vector<double> points; // orbit order, points[0] has the lexicographically least itinerary
    int period = 1;             // prime period
    double multiplier = 0;
    std::string itinerary;      // over {L, R}
};

// Branch structure of a surjective unimodal map on a bounded interval.
struct UnimodalStructure {
    double critical = 0;
    bool hill = true; // increasing-then-decreasing (max at critical); false = valley
    Interval interval;
};

// Locates the interior turning point and verifies both monotone branches
// cover the full interval to 1e-8 (the full-shift precondition).
UnimodalStructure analyze_unimodal(const SmoothMap1D& map);

// One representative per cyclic class of aperiodic itineraries of length
// <= p_max, found by pull-back through the inverse branches and polished by
// Newton on f^p(x) = x.
std::vector<PeriodicOrbit> find_periodic_orbits_unimodal(const SmoothMap1D& map, int p_max);

// binary aperiodic necklace representatives of exact length p ("L" < "R")
std::vector<std::string> aperiodic_necklaces(int p);

struct LawRow {
    PeriodicOrbit orbit;
    double abs_multiplier = 0;
    double law_value = 0; // 2^p
    double rel_error = 0;
    bool exempt = false;  // some |H(x_i)| < 1e-10: outside the law's hypothesis
    double min_abs_H = 0;
};

struct LawReport {
    std::vector<LawRow> rows;
    bool pass = false; // all non-exempt rows within 1e-8
};

LawReport verify_multiplier_law(const SmoothMap1D& map, const DPoly& H, int p_max);

struct DensityHistogram {
    std::vector<double> bin_edges; // bins + 1 edges
    std::vector<double> masses;    // sums to 1
    long long sample_count = 0;
    long long seed = 0;
};

// Histogram of the orbit of x0 (seed-perturbed by an offset of order 1e-12)
// after burn_in steps. Deterministic in (x0, seed). Orbit escape raises
// Errc::domain with the escape index in the message.
DensityHistogram empirical_density(const Map1D& map, double x0, long long n, int bins,
                                   long long burn_in, long long seed);

// bin bookkeeping shared with test doubles (uniform reference sequences)
DensityHistogram histogram_from_samples(const std::vector<double>& samples, const Interval& range,
                                        int bins);

// Complete elliptic integral of the first kind, K(m) with parameter m
// (K(m) = int_0^{pi/2} dt / sqrt(1 - m sin^2 t)), by the arithmetic-geometric
// mean, to ~1e-15.
double elliptic_K(double m);

// Incomplete elliptic integral F(phi | m) by adaptive Simpson.
double elliptic_F(double phi, double m);

// Exact bin masses of the invariant density rho_l on [0,1]:
// rho_l = 1 / (2 K(l) sqrt(x(1-x)(1-l x))).
std::vector<double> katsura_fukuda_bin_masses(double ell, int bins);

} // namespace conj1d
