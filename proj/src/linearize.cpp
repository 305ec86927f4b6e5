#include "conj1d/linearize.hpp"

#include <algorithm>
#include <cmath>

namespace conj1d {

namespace {
constexpr double kBoundaryExclusion = 1e-12;
constexpr int kEntryCap = 100000;
constexpr int kCoreCap = 10000;

// p(c + u) by repeated synthetic division
DPoly taylor_shift(const DPoly& p, double c) {
    std::vector<double> a = p.c;
    int n = p.degree();
    for (int i = 0; i < n; ++i)
        for (int j = n - 1; j >= i; --j) a[static_cast<size_t>(j)] += c * a[static_cast<size_t>(j) + 1];
    return DPoly(std::move(a));
}

// The smooth piece of a map that owns the fixed point (the branch, for
// piecewise maps; charts at the kink itself are not supported).
const SmoothMap1D& smooth_piece_at(const Map1D& map, double x_star) {
    if (const auto* s = std::get_if<SmoothMap1D>(&map)) return *s;
    const auto& pw = std::get<PiecewiseMap1D>(map);
    if (x_star == 0.0)
        fail(Errc::bad_input, "linearization at the kink of a piecewise map is not defined");
    return x_star < 0.0 ? pw.left() : pw.right();
}

struct LocalModel {
    DPoly num, den; // f(x* + u) - x* = num(u)/den(u), num(0) == 0
    double x_star;  // the (re)polished fixed point
};

// Shift the map to fixed-point coordinates. With an exact form available the
// fixed point is first refined by one exact Newton step and the shift is done
// in exact arithmetic, so num's constant term is dropped at ~1e-30 rather
// than at rounding size.
LocalModel build_local_model(const Map1D& map, double x_star) {
    using exact::BigRational;
    using exact::Poly;
    const SmoothMap1D& piece = smooth_piece_at(map, x_star);
    LocalModel model;
    if (piece.exact_form()) {
        const exact::RationalFn& f = *piece.exact_form();
        Poly fix = f.num() - Poly::identity() * f.den(); // zero at fixed points
        BigRational xs = BigRational::from_double(x_star);
        BigRational fv = fix.eval(xs), dv = fix.derivative().eval(xs);
        if (!dv.is_zero()) xs = xs - fv / dv;
        Poly shift({xs, BigRational(1)});
        Poly n_s = f.num().compose(shift);
        Poly d_s = f.den().compose(shift);
        Poly pnum = n_s - xs * d_s;
        auto compile = [](const Poly& p) {
            std::vector<double> c(p.c.size());
            for (size_t i = 0; i < c.size(); ++i) c[i] = p.c[i].to_double();
            return DPoly(std::move(c));
        };
        model.num = compile(pnum);
        model.den = compile(d_s);
        model.x_star = xs.to_double();
    } else {
        double xs = x_star;
        for (int it = 0; it < 3; ++it) {
            double d = piece.deriv_unchecked(xs, 1) - 1.0;
            if (std::fabs(d) < 1e-9) break;
            xs -= (piece.eval_unchecked(xs) - xs) / d;
        }
        DPoly n_s = taylor_shift(piece.fn().num, xs);
        DPoly d_s = taylor_shift(piece.fn().den, xs);
        std::vector<double> pnum(std::max(n_s.c.size(), d_s.c.size()), 0.0);
        for (size_t i = 0; i < pnum.size(); ++i)
            pnum[i] = (i < n_s.c.size() ? n_s.c[i] : 0.0) - xs * (i < d_s.c.size() ? d_s.c[i] : 0.0);
        model.num = DPoly(std::move(pnum));
        model.den = d_s;
        model.x_star = xs;
    }
    if (model.num.c.empty() || model.den.c.empty() || model.den.c[0] == 0.0)
        fail(Errc::bad_input, "degenerate local model at the fixed point");
    model.num.c[0] = 0.0; // pin the model's fixed point to u = 0 exactly
    return model;
}
} // namespace

// ---- LinearizationChart ---------------------------------------------------

double LinearizationChart::model_f(double u) const { return mnum_.eval(u) / mden_.eval(u); }

// local inverse of the shifted model by Newton from the linear prediction;
// valid for |t| within the core, where the model is a contraction story
double LinearizationChart::model_inverse(double t) const {
    double u = t / lambda_;
    for (int it = 0; it < 60; ++it) {
        double den = mden_.eval(u);
        double r = mnum_.eval(u) / den - t;
        if (std::fabs(r) <= 4e-16 * (std::fabs(t) + 1e-300)) return u;
        double d = (mnum_d_.eval(u) * den - mnum_.eval(u) * mden_d_.eval(u)) / (den * den);
        if (d == 0.0) break;
        u -= r / d;
    }
    return u;
}

// limit of u_m / rate^m along the shifted model orbit, in multiplicative
// form. The shifted model keeps every iterate at full relative precision,
// so the increment decays cleanly to the tolerance; a noise-floor guard
// stays as a safety net.
double LinearizationChart::core_limit(double z) const {
    double cur = z - x_star_;
    if (cur == 0.0) return 0.0;
    double est = cur;
    double rate = repelling_ ? 1.0 / lambda_ : lambda_;
    double best_est = est, best_delta = std::numeric_limits<double>::infinity();
    int rising = 0;
    for (int k = 0; k < kCoreCap; ++k) {
        double cur2 = repelling_ ? model_inverse(cur) : model_f(cur);
        if (cur2 == 0.0) return est;
        double ratio = cur2 / (cur * rate);
        double est2 = est * ratio;
        double delta = std::fabs(est2 - est);
        if (delta <= tol_ * (1.0 + std::fabs(est2))) return est2;
        if (delta < best_delta) {
            best_delta = delta;
            best_est = est2;
            rising = 0;
        } else if (++rising >= 8) {
            return best_est;
        }
        est = est2;
        cur = cur2;
    }
    fail(Errc::no_convergence, "Koenigs limit did not settle within the iteration cap");
}

// monotone local inverse of f on the basin, bisection + Newton
double LinearizationChart::local_inverse(double y) const {
    double a = basin_.lo + kBoundaryExclusion * std::max(1.0, std::fabs(basin_.lo));
    double b = basin_.hi - kBoundaryExclusion * std::max(1.0, std::fabs(basin_.hi));
    if (!std::isfinite(a)) a = x_star_ - 1e6;
    if (!std::isfinite(b)) b = x_star_ + 1e6;
    bool increasing = map_deriv(map_, x_star_, 1) > 0.0;
    double lo = a, hi = b;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = map_eval(map_, mid);
        if ((fm < y) == increasing)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 4e-16 * std::max(1.0, std::fabs(lo))) break;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        double d = map_deriv(map_, x, 1);
        if (std::fabs(d) < 1e-12) break;
        double x2 = x - (map_eval(map_, x) - y) / d;
        if (x2 < lo - (hi - lo) || x2 > hi + (hi - lo)) break;
        x = x2;
    }
    return x;
}

double LinearizationChart::eval(double x) const {
    double margin = kBoundaryExclusion * std::max(1.0, std::fabs(x));
    if (!basin_.interior(x, margin))
        fail(Errc::domain, "chart evaluation outside the basin interior");
    // walk into the core, counting steps
    double z = x;
    long long n = 0;
    while (std::fabs(z - x_star_) > core_radius_) {
        z = repelling_ ? local_inverse(z) : map_eval(map_, z);
        if (++n > kEntryCap)
            fail(Errc::no_convergence, "entry-time overflow near the basin boundary");
    }
    double core = core_limit(z);
    // phi(x) = core / lambda^n (attracting), core * lambda^n (repelling)
    double scale = repelling_ ? lambda_ : 1.0 / lambda_;
    double v = core;
    for (long long i = 0; i < n; ++i) v *= scale;
    return v;
}

double LinearizationChart::inverse(double target) const { return inverse(target, x_star_); }

double LinearizationChart::inverse(double target, double guess) const {
    double width = basin_.bounded() ? basin_.width() : 2.0;
    double blo = basin_.lo, bhi = basin_.hi;
    if (!std::isfinite(blo)) blo = x_star_ - 1e6;
    if (!std::isfinite(bhi)) bhi = x_star_ + 1e6;
    double mlo = kBoundaryExclusion * std::max(1.0, std::fabs(blo));
    double mhi = kBoundaryExclusion * std::max(1.0, std::fabs(bhi));
    double lo = blo + 2 * mlo, hi = bhi - 2 * mhi;

    if (!(guess > lo && guess < hi)) guess = x_star_;
    // phi is strictly monotone on the basin; establish its direction
    double probe = std::min(hi - guess, guess - lo) * 0.5;
    probe = std::min(probe, 1e-3 * width);
    bool increasing = eval(std::min(guess + probe, hi)) > eval(std::max(guess - probe, lo));

    // expand a bracket around the guess
    double a = guess, fa = eval(a) - target;
    if (fa == 0.0) return a;
    double step = std::max(1e-6 * width, 1e-12);
    bool go_up = (fa < 0.0) == increasing;
    double b = a, fb = fa;
    for (int it = 0; it < 200; ++it) {
        b = go_up ? std::min(a + step, hi) : std::max(a - step, lo);
        fb = eval(b) - target;
        if (fa * fb <= 0.0) break;
        a = b;
        fa = fb;
        step *= 2.0;
        if ((go_up && a >= hi) || (!go_up && a <= lo))
            fail(Errc::no_convergence, "chart inverse: target outside the sampled range");
    }
    if (fa * fb > 0.0) fail(Errc::no_convergence, "chart inverse: failed to bracket the target");
    if (a > b) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    // bisection with secant acceleration
    for (int it = 0; it < 200; ++it) {
        if (b - a <= 1e-15 * std::max(1.0, std::fabs(a))) break;
        double mid;
        if (std::fabs(fb - fa) > 0.0) {
            mid = a - fa * (b - a) / (fb - fa); // secant
            double margin = 0.1 * (b - a);
            if (!(mid > a + 1e-18 && mid < b - 1e-18)) mid = 0.5 * (a + b);
            else if (it % 3 == 2) mid = 0.5 * (a + b); // keep worst-case bisection progress
            (void)margin;
        } else {
            mid = 0.5 * (a + b);
        }
        double fm = eval(mid) - target;
        if (fm == 0.0) return mid;
        if (fa * fm < 0.0) {
            b = mid;
            fb = fm;
        } else {
            a = mid;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

double LinearizationChart::schroder_residual(int samples) const {
    double blo = basin_.lo, bhi = basin_.hi;
    if (!std::isfinite(blo)) blo = x_star_ - 1.0;
    if (!std::isfinite(bhi)) bhi = x_star_ + 1.0;
    double w = bhi - blo;
    double lo = blo + 1e-6 * w, hi = bhi - 1e-6 * w;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double u = lo + (hi - lo) * (i + 0.5) / samples;
        double x = repelling_ ? local_inverse(u) : u; // ensure f(x) stays in the basin
        double fx = map_eval(map_, x);
        double margin = kBoundaryExclusion * std::max(1.0, std::fabs(fx));
        if (!basin_.interior(fx, 2 * margin)) continue;
        double px = eval(x);
        double pfx = eval(fx);
        double r = std::fabs(pfx - lambda_ * px) / (1.0 + std::fabs(px));
        worst = std::max(worst, r);
    }
    return worst;
}

LinearizationChart koenigs(const Map1D& map, double x_star, double tol) {
    double fx = map_eval(map, x_star);
    if (std::fabs(fx - x_star) > 1e-12 * std::max(1.0, std::fabs(x_star)))
        fail(Errc::bad_input, "koenigs: x_star is not a fixed point");

    LinearizationChart chart;
    chart.map_ = map;
    chart.tol_ = tol;

    LocalModel model = build_local_model(map, x_star);
    chart.x_star_ = model.x_star;
    chart.mnum_ = model.num;
    chart.mden_ = model.den;
    chart.mnum_d_ = model.num.derivative();
    chart.mden_d_ = model.den.derivative();
    // the model's own linearization, consistent with its iterates
    double lambda = model.num.coeff(1) / model.den.coeff(0);
    chart.lambda_ = lambda;
    if (std::fabs(lambda) < 1e-9)
        fail(Errc::nonhyperbolic, "koenigs: superattracting fixed point (lambda ~ 0)");
    if (std::fabs(std::fabs(lambda) - 1.0) < 1e-9)
        fail(Errc::nonhyperbolic, "koenigs: nonhyperbolic fixed point (|lambda| ~ 1)");
    chart.repelling_ = std::fabs(lambda) > 1.0;

    // a conservative local core: hug the fixed point against curvature
    double x_s = chart.x_star_;
    double d2 = std::fabs(map_deriv(map, x_s, 2));
    double scale = std::max(1.0, std::fabs(x_s));
    double core = 0.05 * scale;
    if (d2 > 0) core = std::min(core, 0.05 * std::fabs(lambda * (1.0 - std::fabs(lambda))) / d2 + 1e-8);
    const Interval& dom = map_domain(map);
    if (std::isfinite(dom.lo)) core = std::min(core, 0.5 * (x_s - dom.lo));
    if (std::isfinite(dom.hi)) core = std::min(core, 0.5 * (dom.hi - x_s));
    // the shifted model describes one branch only: stay clear of the kink
    if (std::holds_alternative<PiecewiseMap1D>(map)) core = std::min(core, 0.45 * std::fabs(x_s));
    chart.core_radius_ = core;
    chart.basin_ = Interval::make(x_s - core, x_s + core, false, false);
    return chart;
}

LinearizationChart extend_basin(const LinearizationChart& chart, const Interval& basin,
                                const Map1D& map) {
    if (!basin.interior(chart.x_star_))
        fail(Errc::bad_input, "extend_basin: x_star must be interior to the basin");
    Interval window = basin;
    if (!std::isfinite(window.lo)) window.lo = chart.x_star_ - 1e3;
    if (!std::isfinite(window.hi)) window.hi = chart.x_star_ + 1e3;
    // no interior fixed points besides x_star
    for (const auto& fp : find_fixed_points(map, window, 4096)) {
        if (std::fabs(fp.x_star - chart.x_star_) < 1e-8 * std::max(1.0, std::fabs(fp.x_star))) continue;
        double m = kBoundaryExclusion + 1e-9 * std::max(1.0, std::fabs(fp.x_star));
        if (basin.interior(fp.x_star, m))
            fail(Errc::bad_input, "extend_basin: interior fixed point at " + std::to_string(fp.x_star));
    }
    // the chart is injective only where the map is: f' must keep one sign
    double w = window.width();
    int sign0 = 0;
    for (int i = 0; i < 512; ++i) {
        double x = window.lo + w * (2 * i + 1) / 1024.0;
        double d = map_deriv(map, x, 1);
        int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (sign0 == 0) sign0 = s;
        if (s != 0 && s != sign0)
            fail(Errc::bad_input, "extend_basin: map is not monotone on the basin (critical point inside)");
    }
    LinearizationChart out = chart;
    out.map_ = map;
    out.basin_ = basin;
    return out;
}

Interval basin_of(const Map1D& map, double x_star, std::optional<Interval> search) {
    const Interval& dom = map_domain(map);
    Interval window = search.value_or(
        Interval::make(std::max(dom.lo, x_star - 1.0), std::min(dom.hi, x_star + 1.0), false, false));
    auto fps = find_fixed_points(map, window, 8192);
    double lo = window.lo, hi = window.hi;
    for (const auto& fp : fps) {
        if (std::fabs(fp.x_star - x_star) < 1e-8 * std::max(1.0, std::fabs(x_star))) continue;
        if (fp.x_star < x_star) lo = std::max(lo, fp.x_star);
        if (fp.x_star > x_star) hi = std::min(hi, fp.x_star);
    }
    // clip at the nearest turning points of f: the linearizing chart needs
    // the map monotone across its basin
    const int n = 4096;
    double step = (hi - lo) / n;
    if (step > 0) {
        double prev_d = 0;
        bool have = false;
        for (double x = x_star; x > lo; x -= step) {
            double d = map_deriv(map, x, 1);
            if (have && prev_d * d < 0) {
                lo = std::max(lo, x + step);
                break;
            }
            prev_d = d;
            have = true;
        }
        have = false;
        for (double x = x_star; x < hi; x += step) {
            double d = map_deriv(map, x, 1);
            if (have && prev_d * d < 0) {
                hi = std::min(hi, x - step);
                break;
            }
            prev_d = d;
            have = true;
        }
    }
    return Interval::make(lo, hi, false, false);
}

// ---- ConjugacyTable ---------------------------------------------------------

void ConjugacyTable::rebuild_slopes() {
    size_t n = xs.size();
    slopes_.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> d(n - 1), w(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        w[i] = xs[i + 1] - xs[i];
        d[i] = (hs[i + 1] - hs[i]) / w[i];
    }
    for (size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] == 0.0 || d[i] == 0.0 || (d[i - 1] > 0) != (d[i] > 0)) {
            slopes_[i] = 0.0;
        } else {
            double w1 = 2 * w[i] + w[i - 1], w2 = w[i] + 2 * w[i - 1];
            slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    // one-sided ends (monotonicity-clamped three-point estimates)
    auto end_slope = [](double w0, double w1, double d0, double d1) {
        double s = ((2 * w0 + w1) * d0 - w0 * d1) / (w0 + w1);
        if ((s > 0) != (d0 > 0)) return 0.0;
        if ((d0 > 0) != (d1 > 0) && std::fabs(s) > 3 * std::fabs(d0)) return 3 * d0;
        return s;
    };
    if (n == 2) {
        slopes_[0] = slopes_[1] = d[0];
    } else {
        slopes_[0] = end_slope(w[0], w[1], d[0], d[1]);
        slopes_[n - 1] = end_slope(w[n - 2], w[n - 3], d[n - 2], d[n - 3]);
    }
}

double ConjugacyTable::h_at(double x) const {
    if (xs.empty()) fail(Errc::bad_input, "empty conjugacy table");
    if (slopes_.size() != xs.size())
        fail(Errc::bad_input, "conjugacy table slopes not built (call rebuild_slopes)");
    if (x <= xs.front()) return hs.front() + slopes_.front() * (x - xs.front());
    if (x >= xs.back()) return hs.back() + slopes_.back() * (x - xs.back());
    size_t i = static_cast<size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
    double w = xs[i + 1] - xs[i];
    double t = (x - xs[i]) / w;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * hs[i] + h10 * w * slopes_[i] + h01 * hs[i + 1] + h11 * w * slopes_[i + 1];
}

double table_residual(const ConjugacyTable& table, const Map1D& f, const Map1D& g) {
    double worst = 0.0;
    for (size_t i = 1; i + 1 < table.xs.size(); ++i) {
        double x = table.xs[i];
        double fx = map_eval(f, x);
        if (fx < table.xs.front() || fx > table.xs.back()) continue;
        double lhs = table.h_at(fx);
        double rhs = map_eval(g, table.hs[i]);
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    return worst;
}

ConjugacyTable build_conjugacy(const Map1D& f, const Map1D& g, const Pairing& pairing,
                               const ConjugacyOptions& opt) {
    double lf = map_deriv(f, pairing.x_star, 1);
    double lg = map_deriv(g, pairing.y_star, 1);
    if (std::fabs(lf - lg) > 1e-8 * std::max(1.0, std::fabs(lf)))
        fail(Errc::mismatch, "multiplier mismatch: f'(x*)=" + std::to_string(lf) +
                                 " vs g'(y*)=" + std::to_string(lg) +
                                 " (no differentiable conjugacy)");

    Interval basin_f = opt.basin_f ? *opt.basin_f : basin_of(f, pairing.x_star);
    Interval basin_g = opt.basin_g ? *opt.basin_g : basin_of(g, pairing.y_star);
    LinearizationChart chart_f = extend_basin(koenigs(f, pairing.x_star, opt.chart_tol), basin_f, f);
    LinearizationChart chart_g = extend_basin(koenigs(g, pairing.y_star, opt.chart_tol), basin_g, g);

    double c = 1.0;
    if (pairing.marked) {
        auto [x0, y0] = *pairing.marked;
        if (!basin_f.interior(x0) || !basin_g.interior(y0))
            fail(Errc::bad_input, "marked point outside its basin");
        double pf = chart_f.eval(x0);
        if (pf == 0.0) fail(Errc::bad_input, "marked point coincides with x_star");
        c = chart_g.eval(y0) / pf;
    }

    // table domain: collared basin of f, narrowed so c*phi_f stays within
    // the reachable range of phi_g; collars scale per side (basins around a
    // border-collision point are strongly asymmetric)
    double lo_collar = opt.collar >= 0 ? opt.collar : 1e-3 * (pairing.x_star - basin_f.lo);
    double hi_collar = opt.collar >= 0 ? opt.collar : 1e-3 * (basin_f.hi - pairing.x_star);
    Interval dom = opt.domain_f
                       ? *opt.domain_f
                       : Interval::make(basin_f.lo + lo_collar, basin_f.hi - hi_collar, true, true);
    double g_lo = basin_g.lo + std::max(1e-6 * (pairing.y_star - basin_g.lo), 10 * kBoundaryExclusion);
    double g_hi = basin_g.hi - std::max(1e-6 * (basin_g.hi - pairing.y_star), 10 * kBoundaryExclusion);
    double t_lo = chart_g.eval(g_lo), t_hi = chart_g.eval(g_hi);
    if (t_lo > t_hi) std::swap(t_lo, t_hi);

    int n = std::max(opt.grid_n, 9);
    ConjugacyTable table;
    table.pairing = "fixed(" + std::to_string(pairing.x_star) + "->" + std::to_string(pairing.y_star) + ")";
    if (pairing.marked)
        table.pairing += " marked(" + std::to_string(pairing.marked->first) + "->" +
                         std::to_string(pairing.marked->second) + ")";
    table.xs.reserve(static_cast<size_t>(n));
    table.hs.reserve(static_cast<size_t>(n));

    double guess = pairing.y_star;
    for (int i = 0; i < n; ++i) {
        double frac = opt.cosine_grid ? 0.5 * (1.0 - std::cos(M_PI * i / (n - 1)))
                                      : static_cast<double>(i) / (n - 1);
        double x = dom.lo + (dom.hi - dom.lo) * frac;
        double target = c * chart_f.eval(x);
        if (target < t_lo || target > t_hi) continue; // beyond g's collared basin
        double h;
        if (std::fabs(x - pairing.x_star) < 1e-14 * std::max(1.0, std::fabs(pairing.x_star))) {
            h = pairing.y_star;
        } else {
            h = chart_g.inverse(target, guess);
        }
        table.xs.push_back(x);
        table.hs.push_back(h);
        guess = h;
    }
    if (table.xs.size() < 9)
        fail(Errc::no_convergence, "conjugacy table came out too small; widen basins or grid");

    // strict monotonicity is the homeomorphism invariant
    bool inc = table.hs.back() > table.hs.front();
    for (size_t i = 0; i + 1 < table.hs.size(); ++i) {
        bool ok = inc ? table.hs[i + 1] > table.hs[i] : table.hs[i + 1] < table.hs[i];
        if (!ok) fail(Errc::no_convergence, "conjugacy table is not strictly monotone");
    }
    table.rebuild_slopes();
    table.residual_sup = table_residual(table, f, g);
    return table;
}

ConjugacyTable extend_across_kink(const ConjugacyTable& h_right, const PiecewiseMap1D& f,
                                  const PiecewiseMap1D& g) {
    if (h_right.xs.empty() || std::fabs(h_right.xs.front()) > 1e-9 ||
        std::fabs(h_right.hs.front()) > 1e-9)
        fail(Errc::bad_input, "kink extension requires a right table anchored at h(0) = 0");

    // nearest fixed point below 0, searched on windows grown from the scale
    // of the right table (fixed points here live at mu scale; a wide grid
    // would step right over them)
    double table_scale = std::max(h_right.xs.back() - h_right.xs.front(), 1e-9);
    auto left_fixed_bound = [&](const Map1D& m) {
        double dom_lo = std::max(map_domain(m).lo, -1e6);
        for (double w = 2.0 * table_scale;; w *= 8.0) {
            double lo = std::max(dom_lo, -w);
            auto fps = find_fixed_points(m, Interval::make(lo, -1e-15, true, true), 4096);
            if (!fps.empty()) return fps.back().x_star; // closest to the kink
            if (lo == dom_lo) return dom_lo;            // none: the domain bounds us
        }
    };
    double left_bound = left_fixed_bound(Map1D{f});
    double g_left_bound = left_fixed_bound(Map1D{g});

    auto g_left_inverse = [&](double v) {
        double lo = g_left_bound, hi = 0.0;
        double glo = g.left().eval_unchecked(lo), ghi = g.left().eval_unchecked(hi);
        bool increasing = ghi > glo;
        double vmin = std::min(glo, ghi), vmax = std::max(glo, ghi);
        // interpolated h values can overshoot the range by a residual-sized slack
        double slack = 1e-6 * (vmax - vmin);
        if (v < vmin || v > vmax) {
            if (v < vmin - slack || v > vmax + slack)
                fail(Errc::mismatch, "g_L inversion: value outside the branch range");
            v = std::clamp(v, vmin, vmax);
        }
        for (int it = 0; it < 110; ++it) {
            double mid = 0.5 * (lo + hi);
            double gm = g.left().eval_unchecked(mid);
            if ((gm < v) == increasing)
                lo = mid;
            else
                hi = mid;
        }
        double y = 0.5 * (lo + hi);
        for (int it = 0; it < 3; ++it) {
            double d = g.left().deriv_unchecked(y, 1);
            if (std::fabs(d) < 1e-12) break;
            double y2 = y - (g.left().eval_unchecked(y) - v) / d;
            if (y2 < g_left_bound || y2 > 0) break;
            y = y2;
        }
        return y;
    };

    // left grid matches the right table's average spacing
    double spacing = h_right.xs.size() > 1
                         ? (h_right.xs.back() - h_right.xs.front()) /
                               static_cast<double>(h_right.xs.size() - 1)
                         : 1e-4;
    double collar = std::max(1e-3 * (0.0 - left_bound), 2 * kBoundaryExclusion);
    double x_lo = left_bound + collar;
    int n_left = static_cast<int>(std::floor((0.0 - x_lo) / spacing));
    n_left = std::clamp(n_left, 16, 100000);

    ConjugacyTable out;
    out.pairing = h_right.pairing + " +kink";
    out.xs.reserve(h_right.xs.size() + static_cast<size_t>(n_left));
    out.hs.reserve(out.xs.capacity());

    for (int i = 0; i < n_left; ++i) {
        double x = x_lo + (0.0 - x_lo) * i / n_left; // strictly below 0
        // march the orbit forward until it crosses the kink
        double y = x;
        int m = 0;
        while (y < 0) {
            y = f.eval(y);
            if (++m > 10000) fail(Errc::no_convergence, "kink extension: orbit stuck left of 0");
        }
        if (y > h_right.xs.back())
            fail(Errc::mismatch, "kink extension: image " + std::to_string(y) +
                                     " beyond the right table");
        double v = h_right.h_at(y);
        for (int k = 0; k < m; ++k) v = g_left_inverse(v);
        out.xs.push_back(x);
        out.hs.push_back(v);
    }
    out.junctions.push_back(out.xs.size()); // index of the stitch at x = 0
    out.xs.insert(out.xs.end(), h_right.xs.begin(), h_right.xs.end());
    out.hs.insert(out.hs.end(), h_right.hs.begin(), h_right.hs.end());

    bool inc = out.hs.back() > out.hs.front();
    for (size_t i = 0; i + 1 < out.hs.size(); ++i) {
        bool ok = inc ? out.hs[i + 1] > out.hs[i] : out.hs[i + 1] < out.hs[i];
        if (!ok) fail(Errc::no_convergence, "kink-extended table is not strictly monotone");
    }
    out.rebuild_slopes();
    out.residual_sup = table_residual(out, Map1D{f}, Map1D{g});
    return out;
}

double slope_ratio(const PiecewiseMap1D& map) {
    double l = map.left().deriv_unchecked(0.0, 1);
    double r = map.right().deriv_unchecked(0.0, 1);
    if (l == 0.0 || r == 0.0) fail(Errc::bad_input, "slope ratio undefined: one-sided slope is zero");
    return l / r;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int m) {
    // Fornberg's recursion, specialized to return the m-th derivative row.
    int n = static_cast<int>(nodes.size()) - 1;
    std::vector<std::vector<std::vector<double>>> delta(
        static_cast<size_t>(m + 1),
        std::vector<std::vector<double>>(static_cast<size_t>(n + 1),
                                         std::vector<double>(static_cast<size_t>(n + 1), 0.0)));
    delta[0][0][0] = 1.0;
    double c1 = 1.0;
    for (int nn = 1; nn <= n; ++nn) {
        double c2 = 1.0;
        for (int v = 0; v < nn; ++v) {
            double c3 = nodes[static_cast<size_t>(nn)] - nodes[static_cast<size_t>(v)];
            c2 *= c3;
            for (int mm = 0; mm <= std::min(nn, m); ++mm) {
                double prev = mm > 0 ? delta[static_cast<size_t>(mm - 1)][static_cast<size_t>(nn - 1)]
                                            [static_cast<size_t>(v)]
                                     : 0.0;
                delta[static_cast<size_t>(mm)][static_cast<size_t>(nn)][static_cast<size_t>(v)] =
                    ((nodes[static_cast<size_t>(nn)] - x0) *
                         delta[static_cast<size_t>(mm)][static_cast<size_t>(nn - 1)][static_cast<size_t>(v)] -
                     mm * prev) /
                    c3;
            }
        }
        for (int mm = 0; mm <= std::min(nn, m); ++mm) {
            double prev = mm > 0 ? delta[static_cast<size_t>(mm - 1)][static_cast<size_t>(nn - 1)]
                                        [static_cast<size_t>(nn - 1)]
                                 : 0.0;
            delta[static_cast<size_t>(mm)][static_cast<size_t>(nn)][static_cast<size_t>(nn)] =
                c1 / c2 *
                (mm * prev - (nodes[static_cast<size_t>(nn - 1)] - x0) *
                                 delta[static_cast<size_t>(mm)][static_cast<size_t>(nn - 1)]
                                      [static_cast<size_t>(nn - 1)]);
        }
        c1 = c2;
    }
    std::vector<double> w(static_cast<size_t>(n + 1));
    for (int v = 0; v <= n; ++v)
        w[static_cast<size_t>(v)] = delta[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(v)];
    return w;
}

SmoothnessReport smoothness_report(const ConjugacyTable& table, const Map1D& f, const Map1D& g,
                                   double location) {
    const auto& xs = table.xs;
    const auto& hs = table.hs;
    auto it = std::lower_bound(xs.begin(), xs.end(), location - 1e-12 * std::max(1.0, std::fabs(location)));
    if (it == xs.end()) fail(Errc::bad_input, "smoothness location beyond the table");
    size_t idx = static_cast<size_t>(it - xs.begin());
    if (std::fabs(xs[idx] - location) > 1e-9 * std::max(1.0, std::fabs(location)))
        fail(Errc::bad_input, "smoothness location must coincide with a grid point");
    if (idx < 8 || idx + 8 >= xs.size())
        fail(Errc::bad_input, "grid too coarse near location (< 8 points on a side)");

    auto one_sided = [&](bool right, int m, int npts) {
        std::vector<double> nodes, vals;
        for (int k = 0; k < npts; ++k) {
            size_t j = right ? idx + static_cast<size_t>(k) : idx - static_cast<size_t>(k);
            nodes.push_back(xs[j]);
            vals.push_back(hs[j]);
        }
        std::vector<double> w = fd_weights(location, nodes, m);
        double acc = 0.0;
        for (size_t k = 0; k < w.size(); ++k) acc += w[k] * vals[k];
        return acc;
    };

    SmoothnessReport rep;
    rep.location = location;
    rep.right_deriv = one_sided(true, 1, 4);
    rep.left_deriv = one_sided(false, 1, 4);
    rep.match_error = std::fabs(rep.left_deriv - rep.right_deriv) / std::max(1.0, std::fabs(rep.right_deriv));
    rep.second_deriv_jump = std::fabs(one_sided(true, 2, 5) - one_sided(false, 2, 5));
    // consistency: the stored residual should reflect the current table
    (void)f;
    (void)g;
    return rep;
}

TransportCheck check_multiplier_transport(const ConjugacyTable& table, const Map1D& f,
                                          const Map1D& g) {
    TransportCheck out;
    if (table.xs.empty()) return out;
    Interval window = Interval::make(table.xs.front(), table.xs.back(), true, true);
    for (const auto& fp : find_fixed_points(f, window, 4096)) {
        double y = table.h_at(fp.x_star);
        double gy = map_eval(g, y);
        out.max_fixed_point_error = std::max(out.max_fixed_point_error, std::fabs(gy - y));
        double gm = map_deriv(g, y, 1);
        out.max_multiplier_error = std::max(out.max_multiplier_error, std::fabs(fp.multiplier - gm));
        ++out.fixed_points_checked;
    }
    return out;
}

} // namespace conj1d
