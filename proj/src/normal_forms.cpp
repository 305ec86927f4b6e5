#include "conj1d/normal_forms.hpp"

#include <algorithm>
#include <cmath>

#include "conj1d/orbits.hpp"

namespace conj1d {

namespace {

// -f(-x): mirrors a smooth map through the origin
SmoothMap1D flip_smooth(const SmoothMap1D& m) {
    auto flip_poly = [](const DPoly& p, bool negate) {
        DPoly q = p;
        for (size_t i = 0; i < q.c.size(); ++i) {
            if (i % 2 == 1) q.c[i] = -q.c[i];
            if (negate) q.c[i] = -q.c[i];
        }
        return q;
    };
    const RatFnD& f = m.fn();
    Interval d = m.domain();
    Interval flipped = Interval::make(-d.hi, -d.lo, d.hi_closed, d.lo_closed);
    return SmoothMap1D(RatFnD(flip_poly(f.num, true), flip_poly(f.den, false)), flipped,
                       m.label() + "~xflip");
}

MapFamily transform_family(const MapFamily& f, bool flip_x, bool flip_mu) {
    if (!flip_x && !flip_mu) return f;
    MapFamily out;
    out.label = f.label + (flip_x ? "~xflip" : "") + (flip_mu ? "~muflip" : "");
    auto inner = f.member;
    out.member = [inner, flip_x, flip_mu](double mu) -> Map1D {
        Map1D m = inner(flip_mu ? -mu : mu);
        if (!flip_x) return m;
        if (auto* s = std::get_if<SmoothMap1D>(&m)) return flip_smooth(*s);
        fail(Errc::bad_input, "x-flip is only supported for smooth families");
    };
    return out;
}

SmoothMap1D smooth_member(const MapFamily& f, double mu) {
    Map1D m = f.member(mu);
    if (auto* s = std::get_if<SmoothMap1D>(&m)) return *s;
    fail(Errc::bad_input, f.label + ": expected a smooth (non-piecewise) family");
}

PiecewiseMap1D piecewise_member(const MapFamily& f, double mu) {
    Map1D m = f.member(mu);
    if (auto* s = std::get_if<PiecewiseMap1D>(&m)) return *s;
    fail(Errc::bad_input, f.label + ": expected a piecewise family");
}

// df/dmu at (x, 0) by central difference in the family parameter
double mu_derivative(const MapFamily& f, double x, double h = 1e-6) {
    double up = map_eval(f.member(h), x);
    double dn = map_eval(f.member(-h), x);
    return (up - dn) / (2 * h);
}

// fixed points strictly inside (lo, hi), refined; wraps find_fixed_points
std::vector<FixedPointInfo> fixed_points_in(const Map1D& m, double lo, double hi, int grid) {
    auto all = find_fixed_points(m, Interval::make(lo, hi, true, true), grid);
    return all;
}

} // namespace

SNAssumptions check_sn_assumptions(const MapFamily& f) {
    auto probe = [&](const MapFamily& fam) {
        SmoothMap1D m0 = smooth_member(fam, 0.0);
        double f00 = m0.eval(0.0);
        double fx = m0.deriv(0.0, 1);
        double fxx = m0.deriv(0.0, 2);
        double fmu = mu_derivative(fam, 0.0);
        return std::array<double, 4>{f00, fx, fmu, fxx};
    };

    auto raw = probe(f);
    bool flip_x = raw[3] > 0;
    // the x-flip negates df/dmu as well, so decide the mu-flip afterwards
    double fmu_after_x = flip_x ? -raw[2] : raw[2];
    bool flip_mu = fmu_after_x < 0;
    MapFamily norm = transform_family(f, flip_x, flip_mu);
    auto vals = probe(norm);

    SNAssumptions out;
    out.normalized = norm;
    out.flipped_x = flip_x;
    out.flipped_mu = flip_mu;
    out.f_at_origin = vals[0];
    out.fx = vals[1];
    out.fmu = vals[2];
    out.fxx = vals[3];
    SmoothMap1D m0 = smooth_member(norm, 0.0);
    out.fxxx = m0.deriv(0.0, 3);
    if (std::fabs(out.f_at_origin) > 1e-10)
        fail(Errc::assumption, "saddle-node assumption failed: f(0,0) = 0 (got " +
                                   std::to_string(out.f_at_origin) + ")");
    if (std::fabs(out.fx - 1.0) > 1e-8)
        fail(Errc::assumption, "saddle-node assumption failed: df/dx(0,0) = 1 (got " +
                                   std::to_string(out.fx) + ")");
    if (!(out.fmu > 0))
        fail(Errc::assumption, "saddle-node assumption failed: df/dmu(0,0) > 0 (got " +
                                   std::to_string(out.fmu) + ")");
    if (!(out.fxx < 0))
        fail(Errc::assumption, "saddle-node assumption failed: d2f/dx2(0,0) < 0 (got " +
                                   std::to_string(out.fxx) + ")");
    out.g0 = 2.0 * out.fxxx / (3.0 * out.fxx * out.fxx);
    return out;
}

namespace {

// the two fixed points of a normalized saddle-node family near 0
std::pair<FixedPointInfo, FixedPointInfo> sn_fixed_pair(const MapFamily& fam, double mu,
                                                        double fmu, double fxx) {
    if (!(mu > 0)) fail(Errc::assumption, "saddle-node multipliers need mu > 0 (two fixed points)");
    Map1D m = fam.member(mu);
    double scale = std::sqrt(std::max(2.0 * fmu * mu / std::max(std::fabs(fxx), 1e-8), mu));
    for (double w = 2.5 * scale; w <= 40.0 * scale + 1e-9; w *= 2.0) {
        auto fps = fixed_points_in(m, -w, w, 1024);
        if (fps.size() == 2) return {fps[0], fps[1]};
        if (fps.size() > 2) break; // window swallowed a distant fixed point
    }
    fail(Errc::assumption, "could not isolate the two saddle-node fixed points (mu too large?)");
}

} // namespace

SNMultipliers sn_multipliers(const MapFamily& f, double mu) {
    SNAssumptions chk = check_sn_assumptions(f);
    auto [fp_lo, fp_hi] = sn_fixed_pair(chk.normalized, mu, chk.fmu, chk.fxx);

    SNMultipliers out;
    // with fxx < 0 the left fixed point is the repelling one
    if (fp_lo.multiplier >= fp_hi.multiplier) {
        out.lambda_plus = fp_lo.multiplier;
        out.x_plus = fp_lo.x_star;
        out.lambda_minus = fp_hi.multiplier;
        out.x_minus = fp_hi.x_star;
    } else {
        out.lambda_plus = fp_hi.multiplier;
        out.x_plus = fp_hi.x_star;
        out.lambda_minus = fp_lo.multiplier;
        out.x_minus = fp_lo.x_star;
    }
    double root = std::sqrt(-2.0 * chk.fmu * chk.fxx * mu);
    double linear = 2.0 * chk.fmu * chk.fxxx / (3.0 * chk.fxx) * mu;
    out.series_plus = 1.0 + root - linear;
    out.series_minus = 1.0 - root - linear;
    return out;
}

namespace {

// numeric multipliers of the extended form y + nu - y^2 + a y^3
std::pair<double, double> sigma_pair(double nu, double a) {
    Params p;
    p["nu"] = exact::BigRational::from_double(nu);
    p["a"] = exact::BigRational::from_double(a);
    MapFamily fam{"saddle-node", [p](double) { return catalog_make("saddle-node", p); }};
    double fxx = -2.0;
    auto [lo, hi] = sn_fixed_pair(fam, nu, 1.0, fxx);
    double lp = std::max(lo.multiplier, hi.multiplier);
    double lm = std::min(lo.multiplier, hi.multiplier);
    return {lp, lm};
}

} // namespace

SNFit sn_fit(const MapFamily& f, double mu) {
    SNAssumptions chk = check_sn_assumptions(f);
    SNMultipliers target = sn_multipliers(chk.normalized, mu);

    double nu = std::pow((target.lambda_plus - target.lambda_minus) / 4.0, 2);
    double a = chk.g0;

    auto residual = [&](double n_, double a_) -> std::pair<double, double> {
        auto [sp, sm] = sigma_pair(n_, a_);
        return {sp - target.lambda_plus, sm - target.lambda_minus};
    };

    auto [r1, r2] = residual(nu, a);
    double norm = std::max(std::fabs(r1), std::fabs(r2));
    for (int it = 0; it < 100 && norm > 1e-13; ++it) {
        double hn = 1e-6 * std::max(std::fabs(nu), 1e-9);
        // the multipliers feel a only at order nu^(3/2); a wide step keeps
        // the difference quotient above the fixed-point solve noise
        double ha = 1e-4 * std::max(std::fabs(a), 1.0);
        auto [r1n, r2n] = residual(nu + hn, a);
        auto [r1a, r2a] = residual(nu, a + ha);
        double j11 = (r1n - r1) / hn, j12 = (r1a - r1) / ha;
        double j21 = (r2n - r2) / hn, j22 = (r2a - r2) / ha;
        double det = j11 * j22 - j12 * j21;
        if (std::fabs(det) < 1e-14) fail(Errc::no_convergence, "sn_fit: singular Newton system");
        double dn = (-r1 * j22 + r2 * j12) / det;
        double da = (-r2 * j11 + r1 * j21) / det;
        // damped update: keep nu positive, backtrack until the residual drops
        double step = 1.0;
        for (int bt = 0; bt < 30; ++bt, step *= 0.5) {
            double nu2 = nu + step * dn, a2 = a + step * da;
            if (!(nu2 > 0)) continue;
            try {
                auto [q1, q2] = residual(nu2, a2);
                double norm2 = std::max(std::fabs(q1), std::fabs(q2));
                if (norm2 < norm) {
                    nu = nu2;
                    a = a2;
                    r1 = q1;
                    r2 = q2;
                    norm = norm2;
                    break;
                }
            } catch (const Error&) {
                // window failure at an aggressive step: shrink and retry
            }
            if (bt == 29) fail(Errc::no_convergence, "sn_fit: line search stalled");
        }
    }
    if (norm > 1e-10) fail(Errc::no_convergence, "sn_fit: Newton did not reach tolerance");

    SNFit fit;
    fit.mu = mu;
    fit.nu = nu;
    fit.a = a;
    fit.multiplier_residual = norm;
    fit.flipped_x = chk.flipped_x;
    fit.flipped_mu = chk.flipped_mu;
    return fit;
}

namespace {

struct ThreePoints {
    FixedPointInfo left, center, right;
};

ThreePoints pitchfork_points(const Map1D& m, double mu, const std::string& what) {
    if (!(mu > 0)) fail(Errc::assumption, what + ": need mu > 0 (three fixed points)");
    for (double w = 2.5 * std::sqrt(mu); w <= 80.0 * std::sqrt(mu) + 1e-9; w *= 2.0) {
        auto fps = fixed_points_in(m, -w, w, 2048);
        if (fps.size() == 3) return {fps[0], fps[1], fps[2]};
        if (fps.size() > 3) break;
    }
    fail(Errc::assumption, what + ": could not isolate exactly three fixed points");
}

std::array<double, 3> pf_sigma(double nu, double a, double b, double mu_scale) {
    Params p;
    p["nu"] = exact::BigRational::from_double(nu);
    p["a"] = exact::BigRational::from_double(a);
    p["b"] = exact::BigRational::from_double(b);
    Map1D m = catalog_make("pitchfork", p);
    ThreePoints tp = pitchfork_points(m, mu_scale, "pitchfork normal form");
    return {tp.left.multiplier, tp.center.multiplier, tp.right.multiplier};
}

} // namespace

PFFit pf_fit(const MapFamily& f, double mu) {
    ThreePoints target = pitchfork_points(f.member(mu), mu, f.label);
    std::array<double, 3> want{target.left.multiplier, target.center.multiplier,
                               target.right.multiplier};

    double nu = target.center.multiplier - 1.0;
    double a = 0.0, b = 0.0;
    if (!(nu > 0)) fail(Errc::assumption, "pf_fit: center multiplier must exceed 1 for mu > 0");

    auto residual = [&](double n_, double a_, double b_) {
        std::array<double, 3> s = pf_sigma(n_, a_, b_, n_);
        return std::array<double, 3>{s[0] - want[0], s[1] - want[1], s[2] - want[2]};
    };

    auto rnorm = [](const std::array<double, 3>& r) {
        return std::max({std::fabs(r[0]), std::fabs(r[1]), std::fabs(r[2])});
    };

    std::array<double, 3> r = residual(nu, a, b);
    double norm = rnorm(r);
    for (int it = 0; it < 100 && norm > 1e-13; ++it) {
        double hn = 1e-6 * std::max(std::fabs(nu), 1e-9);
        // sensitivities to a and b scale like nu^2 and nu; take wide steps
        double ha = 1e-4 * std::max(std::fabs(a), 1.0);
        double hb = 1e-4 * std::max(std::fabs(b), 1.0);
        std::array<double, 3> rn = residual(nu + hn, a, b);
        std::array<double, 3> ra = residual(nu, a + ha, b);
        std::array<double, 3> rb = residual(nu, a, b + hb);
        double J[3][3];
        for (int i = 0; i < 3; ++i) {
            J[i][0] = (rn[static_cast<size_t>(i)] - r[static_cast<size_t>(i)]) / hn;
            J[i][1] = (ra[static_cast<size_t>(i)] - r[static_cast<size_t>(i)]) / ha;
            J[i][2] = (rb[static_cast<size_t>(i)] - r[static_cast<size_t>(i)]) / hb;
        }
        // solve J d = -r by Gaussian elimination with partial pivoting
        double A[3][4];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) A[i][j] = J[i][j];
            A[i][3] = -r[static_cast<size_t>(i)];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int i = col + 1; i < 3; ++i)
                if (std::fabs(A[i][col]) > std::fabs(A[piv][col])) piv = i;
            if (std::fabs(A[piv][col]) < 1e-14)
                fail(Errc::no_convergence, "pf_fit: singular Newton system");
            std::swap(A[col], A[piv]);
            for (int i = col + 1; i < 3; ++i) {
                double m = A[i][col] / A[col][col];
                for (int j = col; j < 4; ++j) A[i][j] -= m * A[col][j];
            }
        }
        double d[3];
        for (int i = 2; i >= 0; --i) {
            double s = A[i][3];
            for (int j = i + 1; j < 3; ++j) s -= A[i][j] * d[j];
            d[i] = s / A[i][i];
        }
        double step = 1.0;
        for (int bt = 0; bt < 30; ++bt, step *= 0.5) {
            double nu2 = nu + step * d[0], a2 = a + step * d[1], b2 = b + step * d[2];
            if (!(nu2 > 0)) continue;
            try {
                std::array<double, 3> q = residual(nu2, a2, b2);
                if (rnorm(q) < norm) {
                    nu = nu2;
                    a = a2;
                    b = b2;
                    r = q;
                    norm = rnorm(q);
                    break;
                }
            } catch (const Error&) {
            }
            if (bt == 29) fail(Errc::no_convergence, "pf_fit: line search stalled");
        }
    }
    if (norm > 1e-10) fail(Errc::no_convergence, "pf_fit: Newton did not reach tolerance");

    PFFit fit;
    fit.mu = mu;
    fit.nu = nu;
    fit.a = a;
    fit.b = b;
    fit.residual = norm;
    return fit;
}

BCAssumptions check_bc_assumptions(const MapFamily& f) {
    PiecewiseMap1D m0 = piecewise_member(f, 0.0);
    BCAssumptions out;
    double f0 = m0.left().eval_unchecked(0.0);
    if (std::fabs(f0) > 1e-10)
        fail(Errc::assumption, "border-collision assumption failed: f(0,0) = 0 (got " +
                                   std::to_string(f0) + ")");
    out.a_L = m0.left().deriv_unchecked(0.0, 1);
    out.a_R = m0.right().deriv_unchecked(0.0, 1);
    out.beta = mu_derivative(f, 0.0);
    out.fxx_L = m0.left().deriv_unchecked(0.0, 2);
    out.fxx_R = m0.right().deriv_unchecked(0.0, 2);
    if (!(out.a_L > 1))
        fail(Errc::assumption,
             "border-collision assumption failed: a_L > 1 (got " + std::to_string(out.a_L) + ")");
    if (!(out.a_R > 0 && out.a_R < 1))
        fail(Errc::assumption,
             "border-collision assumption failed: 0 < a_R < 1 (got " + std::to_string(out.a_R) + ")");
    if (!(out.beta > 0))
        fail(Errc::assumption,
             "border-collision assumption failed: beta > 0 (got " + std::to_string(out.beta) + ")");
    out.g0 = 0.5 * out.beta *
             (out.fxx_L - out.a_L * (1 - out.a_L) / (out.a_R * (1 - out.a_R)) * out.fxx_R);
    return out;
}

BCMultipliers bc_multipliers(const MapFamily& f, double mu) {
    BCAssumptions chk = check_bc_assumptions(f);
    if (!(mu > 0)) fail(Errc::assumption, "border-collision multipliers need mu > 0 (no fixed points for mu < 0)");
    PiecewiseMap1D m = piecewise_member(f, mu);

    BCMultipliers out;
    double wl = 4.0 * chk.beta * mu / (chk.a_L - 1.0);
    double wr = 4.0 * chk.beta * mu / (1.0 - chk.a_R);
    bool found_l = false, found_r = false;
    for (int grow = 0; grow < 6 && !(found_l && found_r); ++grow) {
        auto fps = fixed_points_in(Map1D{m}, -wl, wr, 2048);
        for (const auto& fp : fps) {
            if (fp.x_star < 0 && !found_l) {
                out.x_L = fp.x_star;
                out.lambda_L = fp.multiplier;
                found_l = true;
            }
            if (fp.x_star > 0 && !found_r) {
                out.x_R = fp.x_star;
                out.lambda_R = fp.multiplier;
                found_r = true;
            }
        }
        wl *= 2.0;
        wr *= 2.0;
    }
    if (!found_l || !found_r)
        fail(Errc::assumption, "missing border-collision fixed point (mu of the wrong sign?)");
    out.slope_ratio = m.left().deriv_unchecked(0.0, 1) / m.right().deriv_unchecked(0.0, 1);
    return out;
}

BCFit bc_fit(const MapFamily& f, double mu) {
    BCMultipliers target = bc_multipliers(f, mu);

    BCFit fit;
    fit.mu = mu;
    fit.s_R = target.lambda_R;                  // sigma_R(s_R) = s_R identically
    fit.s_L = target.slope_ratio * fit.s_R;     // r(mu) = s_L / s_R
    if (!(fit.s_L > 1.0))
        fail(Errc::assumption, "bc_fit: fitted s_L <= 1 (assumptions fail at this mu)");
    if (!(fit.s_R > 0.0 && fit.s_R < 1.0))
        fail(Errc::assumption, "bc_fit: fitted s_R outside (0,1) at this mu");

    // left fixed point of nu + s_L y + t y^2: t y^2 + (s_L - 1) y + nu = 0,
    // stable branch y = 2 nu / ((1 - s_L) - sqrt((s_L - 1)^2 - 4 t nu))
    const double nu = mu, sl = fit.s_L;
    auto sigma_L = [&](double t) {
        double disc = (sl - 1.0) * (sl - 1.0) - 4.0 * t * nu;
        if (!(disc > 0))
            fail(Errc::no_convergence, "bc_fit: left fixed point lost (discriminant <= 0)");
        double y = 2.0 * nu / ((1.0 - sl) - std::sqrt(disc));
        return sl + 2.0 * t * y;
    };

    double t = (target.lambda_L - sl) * (1.0 - sl) / (2.0 * mu);
    double r = sigma_L(t) - target.lambda_L;
    for (int it = 0; it < 100 && std::fabs(r) > 1e-14; ++it) {
        double h = 1e-6 * std::max(std::fabs(t), 1e-6);
        double drdt = (sigma_L(t + h) - sigma_L(t - h)) / (2 * h);
        if (std::fabs(drdt) < 1e-14) fail(Errc::no_convergence, "bc_fit: flat Newton derivative");
        double step = 1.0, tn = t;
        for (int bt = 0; bt < 30; ++bt, step *= 0.5) {
            tn = t - step * r / drdt;
            try {
                double rn = sigma_L(tn) - target.lambda_L;
                if (std::fabs(rn) < std::fabs(r)) {
                    t = tn;
                    r = rn;
                    break;
                }
            } catch (const Error&) {
            }
            if (bt == 29) fail(Errc::no_convergence, "bc_fit: line search stalled");
        }
    }
    if (std::fabs(r) > 1e-10) fail(Errc::no_convergence, "bc_fit: Newton did not reach tolerance");

    fit.t = t;
    fit.residual_L = std::fabs(r);
    fit.residual_R = 0.0; // algebraic identity of the linear right branch
    fit.residual_slope = std::fabs(fit.s_L / fit.s_R - target.slope_ratio);
    return fit;
}

double aitken_extrapolate(double v1, double v2, double v3) {
    double d1 = v2 - v1, d2 = v3 - v2;
    double denom = d2 - d1;
    if (std::fabs(denom) < 1e-300) return v3;
    return v3 - d2 * d2 / denom;
}

} // namespace conj1d
