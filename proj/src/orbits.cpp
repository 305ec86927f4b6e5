#include "conj1d/orbits.hpp"

#include <algorithm>
#include <cmath>

namespace conj1d {

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::attracting: return "attracting";
        case Stability::repelling: return "repelling";
        default: return "nonhyperbolic";
    }
}

namespace {

Stability classify(double multiplier) {
    double a = std::fabs(multiplier);
    if (std::fabs(a - 1.0) < 1e-9) return Stability::nonhyperbolic;
    return a < 1.0 ? Stability::attracting : Stability::repelling;
}

// f(x) - x, with pole/domain failures surfaced as NaN for grid scans
double displacement(const Map1D& map, double x) {
    try {
        return map_eval(map, x) - x;
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

} // namespace

std::vector<FixedPointInfo> find_fixed_points(const Map1D& map, const Interval& window, int grid_n) {
    if (grid_n < 2) fail(Errc::bad_input, "find_fixed_points: grid_n must be >= 2");
    const Interval& dom = map_domain(map);
    double lo = std::max(window.lo, dom.lo);
    double hi = std::min(window.hi, dom.hi);
    if (!(lo < hi)) fail(Errc::bad_input, "find_fixed_points: window misses the map domain");
    // nudge open ends inward
    if (!dom.contains(lo)) lo = std::nexttoward(lo, hi);
    if (!dom.contains(hi)) hi = std::nexttoward(hi, lo);

    std::vector<double> roots;
    auto push_root = [&](double r) {
        for (double s : roots)
            if (std::fabs(s - r) < 1e-9 * std::max(1.0, std::fabs(r))) return;
        roots.push_back(r);
    };

    double prev_x = lo, prev_g = displacement(map, lo);
    if (prev_g == 0.0) push_root(lo);
    for (int i = 1; i <= grid_n; ++i) {
        double x = lo + (hi - lo) * i / grid_n;
        double g = displacement(map, x);
        if (g == 0.0) push_root(x);
        if (std::isfinite(prev_g) && std::isfinite(g) && prev_g * g < 0.0) {
            double a = prev_x, b = x, ga = prev_g;
            for (int it = 0; it < 200 && (b - a) > 1e-16 * std::max(1.0, std::fabs(a)); ++it) {
                double mid = 0.5 * (a + b);
                double gm = displacement(map, mid);
                if (gm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (ga * gm < 0.0)
                    b = mid;
                else {
                    a = mid;
                    ga = gm;
                }
            }
            double r = 0.5 * (a + b);
            // Newton polish on f(x) - x
            for (int it = 0; it < 8; ++it) {
                double g0 = displacement(map, r);
                double d = map_deriv(map, r, 1) - 1.0;
                if (!std::isfinite(g0) || std::fabs(d) < 1e-9) break;
                double r2 = r - g0 / d;
                if (!std::isfinite(r2) || r2 < a - (b - a) - 1e-12 || r2 > b + (b - a) + 1e-12) break;
                r = r2;
                if (std::fabs(g0) < 1e-15 * std::max(1.0, std::fabs(r))) break;
            }
            push_root(r);
        }
        prev_x = x;
        prev_g = g;
    }

    std::sort(roots.begin(), roots.end());
    std::vector<FixedPointInfo> out;
    for (double r : roots) {
        FixedPointInfo info;
        info.x_star = r;
        info.multiplier = map_deriv(map, r, 1);
        info.stability = classify(info.multiplier);
        out.push_back(info);
    }
    return out;
}

double orbit_multiplier(const Map1D& map, const std::vector<double>& points) {
    if (points.empty()) fail(Errc::bad_input, "empty orbit");
    size_t p = points.size();
    for (size_t i = 0; i < p; ++i) {
        double img = map_eval(map, points[i]);
        double want = points[(i + 1) % p];
        if (std::fabs(img - want) > 1e-8 * std::max(1.0, std::fabs(want)))
            fail(Errc::not_an_orbit, "points do not close up under the map");
    }
    double lambda = 1.0;
    for (double x : points) lambda *= map_deriv(map, x, 1);
    return lambda;
}

UnimodalStructure analyze_unimodal(const SmoothMap1D& map) {
    const Interval& dom = map.domain();
    if (!dom.bounded()) fail(Errc::bad_input, "unimodal analysis needs a bounded interval");
    double lo = dom.lo, hi = dom.hi;

    // locate the single interior sign change of f' (half-offset grid so a
    // symmetric turning point cannot coincide with a node; an exact zero at
    // a node is treated as the crossing itself)
    const int n = 2048;
    double c_lo = 0, c_hi = 0;
    int crossings = 0;
    double prev_x = 0, prev_d = 0;
    bool have_prev = false;
    for (int i = 0; i < n; ++i) {
        double x = lo + (hi - lo) * (2 * i + 1) / (2 * n);
        double d = map.deriv(x, 1);
        if (d == 0.0) {
            ++crossings;
            c_lo = x - (hi - lo) / (2 * n);
            c_hi = x + (hi - lo) / (2 * n);
            have_prev = false;
            continue;
        }
        if (have_prev && prev_d * d < 0.0) {
            ++crossings;
            c_lo = prev_x;
            c_hi = x;
        }
        prev_x = x;
        prev_d = d;
        have_prev = true;
    }
    if (crossings != 1)
        fail(Errc::assumption, map.label() + ": expected exactly one turning point, found " +
                                   std::to_string(crossings));
    double da = map.deriv(c_lo, 1);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (c_lo + c_hi);
        double dm = map.deriv(mid, 1);
        if (da * dm <= 0.0)
            c_hi = mid;
        else {
            c_lo = mid;
            da = dm;
        }
    }

    UnimodalStructure s;
    s.critical = 0.5 * (c_lo + c_hi);
    s.hill = map.deriv(lo + (s.critical - lo) * 0.5, 1) > 0.0;
    s.interval = dom;

    // full-shift check: critical value reaches the far endpoint, boundary
    // values return to the near endpoint
    double w = hi - lo;
    double fc = map.eval(s.critical);
    double flo = map.eval(lo), fhi = map.eval(hi);
    double want_c = s.hill ? hi : lo;
    double want_ends = s.hill ? lo : hi;
    if (std::fabs(fc - want_c) > 1e-8 * w || std::fabs(flo - want_ends) > 1e-8 * w ||
        std::fabs(fhi - want_ends) > 1e-8 * w)
        fail(Errc::assumption, map.label() + ": branches do not cover the interval (not a full shift)");
    return s;
}

namespace {

// monotone branch inversion by bisection + Newton inside the branch interval
double invert_branch(const SmoothMap1D& map, const UnimodalStructure& s, int branch, double y) {
    double a = branch == 0 ? s.interval.lo : s.critical;
    double b = branch == 0 ? s.critical : s.interval.hi;
    double fa = map.eval(a), fb = map.eval(b);
    double ylo = std::min(fa, fb), yhi = std::max(fa, fb);
    // clamp tiny overshoots produced by the full-shift tolerance
    if (y < ylo) {
        if (y < ylo - 1e-6 * s.interval.width()) fail(Errc::no_convergence, "branch inversion: target below range");
        y = ylo;
    }
    if (y > yhi) {
        if (y > yhi + 1e-6 * s.interval.width()) fail(Errc::no_convergence, "branch inversion: target above range");
        y = yhi;
    }
    bool increasing = fb > fa;
    double lo = a, hi = b;
    for (int it = 0; it < 110; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = map.eval(mid);
        if ((fm < y) == increasing)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        double d = map.deriv(x, 1);
        if (std::fabs(d) < 1e-12) break;
        double x2 = x - (map.eval(x) - y) / d;
        if (x2 < a || x2 > b) break;
        x = x2;
    }
    return x;
}

} // namespace

std::vector<std::string> aperiodic_necklaces(int p) {
    std::vector<std::string> out;
    for (unsigned mask = 0; mask < (1u << p); ++mask) {
        std::string w(static_cast<size_t>(p), 'L');
        for (int i = 0; i < p; ++i)
            if (mask & (1u << i)) w[static_cast<size_t>(i)] = 'R';
        // least rotation representative, aperiodic only
        bool least = true, aperiodic = true;
        for (int r = 1; r < p && least; ++r) {
            std::string rot = w.substr(static_cast<size_t>(r)) + w.substr(0, static_cast<size_t>(r));
            if (rot < w) least = false;
            if (rot == w) aperiodic = false;
        }
        if (least && aperiodic) out.push_back(w);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PeriodicOrbit> find_periodic_orbits_unimodal(const SmoothMap1D& map, int p_max) {
    if (p_max < 1) fail(Errc::bad_input, "p_max must be >= 1");
    UnimodalStructure s = analyze_unimodal(map);

    std::vector<PeriodicOrbit> orbits;
    for (int p = 1; p <= p_max; ++p) {
        for (const std::string& itin : aperiodic_necklaces(p)) {
            // pull-back: iterate the p-fold inverse composition along the
            // reversed itinerary until it contracts to a point
            double x = 0.5 * (s.interval.lo + s.interval.hi);
            double prev = x;
            bool converged = false;
            for (int cycle = 0; cycle < 400; ++cycle) {
                for (int j = p - 1; j >= 0; --j)
                    x = invert_branch(map, s, itin[static_cast<size_t>(j)] == 'L' ? 0 : 1, x);
                if (cycle > 0 && std::fabs(x - prev) < 1e-13 * std::max(1.0, std::fabs(x))) {
                    converged = true;
                    break;
                }
                prev = x;
            }
            if (!converged)
                fail(Errc::no_convergence, "pull-back did not converge for itinerary " + itin);

            // Newton polish on f^p(x) - x
            for (int it = 0; it < 4; ++it) {
                double y = x, dprod = 1.0;
                for (int j = 0; j < p; ++j) {
                    dprod *= map.deriv(y, 1);
                    y = map.eval(y);
                }
                double denom = dprod - 1.0;
                if (std::fabs(denom) < 1e-9) break;
                double x2 = x - (y - x) / denom;
                if (x2 < s.interval.lo || x2 > s.interval.hi) break;
                x = x2;
            }

            PeriodicOrbit orbit;
            orbit.period = p;
            orbit.itinerary = itin;
            orbit.points.resize(static_cast<size_t>(p));
            double y = x;
            for (int j = 0; j < p; ++j) {
                orbit.points[static_cast<size_t>(j)] = y;
                y = map.eval(y);
            }
            if (std::fabs(y - x) > 1e-9 * std::max(1.0, std::fabs(x)))
                fail(Errc::no_convergence, "orbit for itinerary " + itin + " failed to close");
            // reject convergence to a shorter period (should not happen for
            // aperiodic itineraries of a true full shift)
            bool shorter = false;
            for (int d = 1; d < p; ++d) {
                if (p % d) continue;
                if (std::fabs(orbit.points[static_cast<size_t>(d)] - orbit.points[0]) <
                    1e-9 * std::max(1.0, std::fabs(orbit.points[0]))) {
                    shorter = true;
                    break;
                }
            }
            if (shorter) continue;
            Map1D as_variant{map};
            orbit.multiplier = orbit_multiplier(as_variant, orbit.points);
            orbits.push_back(std::move(orbit));
        }
    }
    std::sort(orbits.begin(), orbits.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        if (a.period != b.period) return a.period < b.period;
        return a.itinerary < b.itinerary;
    });
    return orbits;
}

LawReport verify_multiplier_law(const SmoothMap1D& map, const DPoly& H, int p_max) {
    LawReport report;
    report.pass = true;
    for (PeriodicOrbit& orbit : find_periodic_orbits_unimodal(map, p_max)) {
        LawRow row;
        row.abs_multiplier = std::fabs(orbit.multiplier);
        row.law_value = std::ldexp(1.0, orbit.period); // 2^p
        row.rel_error = std::fabs(row.abs_multiplier - row.law_value) / row.law_value;
        row.min_abs_H = std::numeric_limits<double>::infinity();
        for (double x : orbit.points) row.min_abs_H = std::min(row.min_abs_H, std::fabs(H.eval(x)));
        row.exempt = row.min_abs_H < 1e-10;
        if (!row.exempt && row.rel_error >= 1e-8) report.pass = false;
        row.orbit = std::move(orbit);
        report.rows.push_back(std::move(row));
    }
    return report;
}

DensityHistogram histogram_from_samples(const std::vector<double>& samples, const Interval& range,
                                        int bins) {
    if (bins < 1) fail(Errc::bad_input, "histogram needs at least one bin");
    if (!range.bounded()) fail(Errc::bad_input, "histogram needs a bounded range");
    DensityHistogram h;
    h.bin_edges.resize(static_cast<size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        h.bin_edges[static_cast<size_t>(i)] = range.lo + range.width() * i / bins;
    h.masses.assign(static_cast<size_t>(bins), 0.0);
    for (double x : samples) {
        int idx = static_cast<int>((x - range.lo) / range.width() * bins);
        idx = std::clamp(idx, 0, bins - 1);
        h.masses[static_cast<size_t>(idx)] += 1.0;
    }
    h.sample_count = static_cast<long long>(samples.size());
    if (!samples.empty())
        for (double& m : h.masses) m /= static_cast<double>(samples.size());
    return h;
}

namespace {

uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

DensityHistogram empirical_density(const Map1D& map, double x0, long long n, int bins,
                                   long long burn_in, long long seed) {
    const Interval& dom = map_domain(map);
    if (!dom.bounded()) fail(Errc::bad_input, "empirical density needs a bounded domain");
    if (n < 100ll * bins) fail(Errc::bad_input, "need at least 100 samples per bin");
    if (!dom.interior(x0)) fail(Errc::bad_input, "x0 must be interior to the domain");

    // tiny seeded offset steers clear of exceptional (eventually periodic) orbits
    double u = static_cast<double>(splitmix64(static_cast<uint64_t>(seed)) >> 11) * 0x1p-53;
    double x = x0 + (0.5 + u) * 1e-12;

    DensityHistogram h;
    h.bin_edges.resize(static_cast<size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        h.bin_edges[static_cast<size_t>(i)] = dom.lo + dom.width() * i / bins;
    h.masses.assign(static_cast<size_t>(bins), 0.0);
    h.seed = seed;

    const double edge_slack = 1e-9 * dom.width();
    long long total = burn_in + n;
    for (long long i = 0; i < total; ++i) {
        if (x < dom.lo || x > dom.hi) {
            if (x > dom.lo - edge_slack && x < dom.hi + edge_slack) {
                x = dom.clamp(x);
            } else {
                fail(Errc::domain, "orbit escaped the domain at step " + std::to_string(i));
            }
        }
        if (i >= burn_in) {
            int idx = static_cast<int>((x - dom.lo) / dom.width() * bins);
            idx = std::clamp(idx, 0, bins - 1);
            h.masses[static_cast<size_t>(idx)] += 1.0;
            ++h.sample_count;
        }
        x = map_eval(map, x);
    }
    for (double& m : h.masses) m /= static_cast<double>(h.sample_count);
    return h;
}

double elliptic_K(double m) {
    if (!(m < 1.0)) fail(Errc::bad_input, "K(m) requires m < 1");
    double a = 1.0, b = std::sqrt(1.0 - m);
    for (int i = 0; i < 60 && std::fabs(a - b) > 1e-17 * a; ++i) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return M_PI / (2.0 * a);
}

namespace {

double simpson(double (*f)(double, double), double m, double a, double b) {
    double c = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a, m) + 4.0 * f(c, m) + f(b, m));
}

double k_integrand(double t, double m) {
    double s = std::sin(t);
    return 1.0 / std::sqrt(1.0 - m * s * s);
}

double adapt(double (*f)(double, double), double m, double a, double b, double whole, double tol,
             int depth) {
    double c = 0.5 * (a + b);
    double left = simpson(f, m, a, c), right = simpson(f, m, c, b);
    if (depth > 40 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(f, m, a, c, left, 0.5 * tol, depth + 1) +
           adapt(f, m, c, b, right, 0.5 * tol, depth + 1);
}

} // namespace

double elliptic_F(double phi, double m) {
    if (phi == 0.0) return 0.0;
    return adapt(k_integrand, m, 0.0, phi, simpson(k_integrand, m, 0.0, phi), 1e-13, 0);
}

std::vector<double> katsura_fukuda_bin_masses(double ell, int bins) {
    if (ell < 0.0 || ell >= 1.0) fail(Errc::bad_input, "ell must lie in [0,1)");
    double K = elliptic_K(ell);
    std::vector<double> cdf(static_cast<size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i) {
        double x = static_cast<double>(i) / bins;
        cdf[static_cast<size_t>(i)] = elliptic_F(std::asin(std::sqrt(x)), ell) / K;
    }
    std::vector<double> masses(static_cast<size_t>(bins));
    for (int i = 0; i < bins; ++i)
        masses[static_cast<size_t>(i)] = cdf[static_cast<size_t>(i) + 1] - cdf[static_cast<size_t>(i)];
    return masses;
}

} // namespace conj1d
