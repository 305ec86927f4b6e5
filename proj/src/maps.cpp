#include "conj1d/maps.hpp"

#include <cmath>
#include <json.hpp>

namespace conj1d {

using exact::BigRational;
using exact::Poly;
using exact::RationalFn;

// ---- RatFnD ------------------------------------------------------------

RatFnD::RatFnD(DPoly n, DPoly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) fail(Errc::bad_input, "rational form with zero denominator");
    DPoly dd = den.derivative();
    DPoly p = num;
    for (int k = 0; k < 3; ++k) {
        p = p.derivative() * den - static_cast<double>(k + 1) * (p * dd);
        dnum[static_cast<size_t>(k)] = p;
    }
}

RatFnD RatFnD::from_exact(const RationalFn& f) {
    auto compile = [](const Poly& p) {
        std::vector<double> c(p.c.size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = p.c[i].to_double();
        return DPoly(std::move(c));
    };
    return RatFnD(compile(f.num()), compile(f.den()));
}

double RatFnD::den_at(double x) const {
    double d = den.eval(x);
    if (den.degree() <= 0) return d;
    double scale = 0.0, ax = std::fabs(x), pw = 1.0;
    for (double c : den.c) {
        scale += std::fabs(c) * pw;
        pw *= ax;
    }
    if (std::fabs(d) <= 1e-13 * scale)
        fail(Errc::pole, "evaluation at a pole (denominator vanishes)");
    return d;
}

double RatFnD::eval(double x) const { return num.eval(x) / den_at(x); }

double RatFnD::deriv(double x, int order) const {
    if (order < 1 || order > 3) fail(Errc::bad_input, "derivative order must be 1..3");
    double d = den_at(x);
    double dp = 1.0;
    for (int i = 0; i <= order; ++i) dp *= d;
    return dnum[static_cast<size_t>(order - 1)].eval(x) / dp;
}

// ---- SmoothMap1D / PiecewiseMap1D ---------------------------------------

SmoothMap1D::SmoothMap1D(RatFnD fn, Interval domain, std::string label,
                         std::optional<RationalFn> exact_form)
    : fn_(std::move(fn)), domain_(domain), exact_(std::move(exact_form)), label_(std::move(label)) {}

double SmoothMap1D::eval(double x) const {
    if (!domain_.contains(x))
        fail(Errc::domain, label_ + ": " + std::to_string(x) + " outside domain " + domain_.str());
    return fn_.eval(x);
}

double SmoothMap1D::deriv(double x, int order) const {
    if (!domain_.contains(x))
        fail(Errc::domain, label_ + ": " + std::to_string(x) + " outside domain " + domain_.str());
    return fn_.deriv(x, order);
}

SmoothMap1D SmoothMap1D::with_domain(Interval d) const {
    SmoothMap1D r = *this;
    r.domain_ = d;
    return r;
}

PiecewiseMap1D::PiecewiseMap1D(SmoothMap1D left, SmoothMap1D right, Interval domain, std::string label)
    : left_(std::move(left)), right_(std::move(right)), domain_(domain), label_(std::move(label)) {
    if (!(domain_.lo < 0.0 && domain_.hi > 0.0))
        fail(Errc::bad_input, "piecewise domain must contain the kink at 0");
    bool exact_both = left_.exact_form() && right_.exact_form();
    if (exact_both) {
        auto l0 = left_.exact_form()->eval(BigRational(0));
        auto r0 = right_.exact_form()->eval(BigRational(0));
        if (!l0 || !r0 || !(*l0 == *r0))
            fail(Errc::bad_input, "piecewise branches disagree at the kink");
    } else {
        double l0 = left_.eval_unchecked(0.0), r0 = right_.eval_unchecked(0.0);
        if (std::fabs(l0 - r0) > 1e-14 * std::max(1.0, std::fabs(l0)))
            fail(Errc::bad_input, "piecewise branches disagree at the kink");
    }
}

double PiecewiseMap1D::eval(double x) const {
    if (!domain_.contains(x))
        fail(Errc::domain, label_ + ": " + std::to_string(x) + " outside domain " + domain_.str());
    return x <= 0.0 ? left_.eval_unchecked(x) : right_.eval_unchecked(x);
}

double PiecewiseMap1D::deriv(double x, int order) const {
    if (!domain_.contains(x))
        fail(Errc::domain, label_ + ": " + std::to_string(x) + " outside domain " + domain_.str());
    return x < 0.0 ? left_.deriv_unchecked(x, order) : right_.deriv_unchecked(x, order);
}

double map_eval(const Map1D& m, double x) {
    return std::visit([x](const auto& f) { return f.eval(x); }, m);
}

double map_deriv(const Map1D& m, double x, int order) {
    return std::visit([x, order](const auto& f) { return f.deriv(x, order); }, m);
}

const Interval& map_domain(const Map1D& m) {
    return std::visit([](const auto& f) -> const Interval& { return f.domain(); }, m);
}

const std::string& map_label(const Map1D& m) {
    return std::visit([](const auto& f) -> const std::string& { return f.label(); }, m);
}

// ---- Mobius -------------------------------------------------------------

Mobius Mobius::make(double a, double b, double c, double d) {
    Mobius m{a, b, c, d, std::nullopt};
    if (std::fabs(m.det()) < 1e-14 * std::max({std::fabs(a * d), std::fabs(b * c), 1e-300}))
        fail(Errc::bad_input, "singular Mobius transformation");
    return m;
}

Mobius Mobius::make_exact(BigRational a, BigRational b, BigRational c, BigRational d) {
    if ((a * d - b * c).is_zero()) fail(Errc::bad_input, "singular Mobius transformation");
    Mobius m{a.to_double(), b.to_double(), c.to_double(), d.to_double(),
             std::array<BigRational, 4>{a, b, c, d}};
    return m;
}

double Mobius::eval(double x) const {
    double d = gamma * x + delta;
    if (d == 0.0) fail(Errc::pole, "Mobius pole");
    return (alpha * x + beta) / d;
}

double Mobius::deriv(double x) const {
    double d = gamma * x + delta;
    if (d == 0.0) fail(Errc::pole, "Mobius pole");
    return det() / (d * d);
}

Mobius Mobius::inverse() const {
    Mobius inv;
    inv.alpha = delta;
    inv.beta = -beta;
    inv.gamma = -gamma;
    inv.delta = alpha;
    if (exact) inv.exact = std::array<BigRational, 4>{(*exact)[3], -(*exact)[1], -(*exact)[2], (*exact)[0]};
    return inv;
}

namespace {

// endpoint of m^-1(interval); Mobius images of +-inf handled explicitly
double mobius_pullback_end(const Mobius& minv, double v) {
    if (std::isinf(v)) {
        if (minv.gamma == 0.0) return v > 0 ? (minv.alpha > 0 ? INFINITY : -INFINITY)
                                            : (minv.alpha > 0 ? -INFINITY : INFINITY);
        return minv.alpha / minv.gamma;
    }
    double d = minv.gamma * v + minv.delta;
    if (d == 0.0) return minv.alpha * v + minv.beta > 0 ? INFINITY : -INFINITY;
    return minv.eval(v);
}

} // namespace

SmoothMap1D mobius_conjugate(const SmoothMap1D& map, const Mobius& m) {
    const Mobius minv = m.inverse();

    // transported domain: m maps it onto map.domain()
    double e1 = mobius_pullback_end(minv, map.domain().lo);
    double e2 = mobius_pullback_end(minv, map.domain().hi);
    bool swapped = e1 > e2;
    Interval dom = Interval::make(std::min(e1, e2), std::max(e1, e2),
                                  swapped ? map.domain().hi_closed : map.domain().lo_closed,
                                  swapped ? map.domain().lo_closed : map.domain().hi_closed);
    // the Mobius pole must not sit inside the new domain
    if (m.gamma != 0.0 && dom.interior(-m.delta / m.gamma))
        fail(Errc::bad_input, "Mobius pole interior to the transported domain");

    std::optional<RationalFn> exact_form;
    if (map.exact_form() && m.exact) {
        const auto& q = *m.exact;
        Poly N({q[1], q[0]}), D({q[3], q[2]});
        const RationalFn& f = *map.exact_form();
        int d1 = std::max(f.num().degree(), f.den().degree());
        Poly A = hom_substitute(f.num(), N, D, d1);
        Poly B = hom_substitute(f.den(), N, D, d1);
        // m^-1(w) = (delta w - beta)/(-gamma w + alpha) applied to A/B
        Poly num2 = q[3] * A - q[1] * B;
        Poly den2 = (BigRational(0) - q[2]) * A + q[0] * B;
        exact_form = RationalFn(num2, den2);
    }

    RatFnD composed;
    if (exact_form) {
        composed = RatFnD::from_exact(*exact_form);
    } else {
        DPoly N({m.beta, m.alpha}), D({m.delta, m.gamma});
        const RatFnD& f = map.fn();
        int d1 = std::max(f.num.degree(), f.den.degree());
        DPoly A = hom_substitute(f.num, N, D, d1);
        DPoly B = hom_substitute(f.den, N, D, d1);
        composed = RatFnD(m.delta * A - m.beta * B, -m.gamma * A + m.alpha * B);
    }
    return SmoothMap1D(std::move(composed), dom, map.label() + "~mobius", std::move(exact_form));
}

DPoly transport_witness(const DPoly& H, const Mobius& m) {
    if (H.degree() > 4) fail(Errc::bad_input, "witness transport requires deg H <= 4");
    DPoly N({m.beta, m.alpha}), D({m.delta, m.gamma});
    DPoly h = hom_substitute(H, N, D, 4);
    double d2 = m.det() * m.det();
    return (1.0 / d2) * h;
}

exact::Poly transport_witness_exact(const Poly& H, const Mobius& m) {
    if (!m.exact) fail(Errc::bad_input, "exact witness transport needs an exact Mobius");
    if (H.degree() > 4) fail(Errc::bad_input, "witness transport requires deg H <= 4");
    const auto& q = *m.exact;
    Poly N({q[1], q[0]}), D({q[3], q[2]});
    Poly h = hom_substitute(H, N, D, 4);
    BigRational det = q[0] * q[3] - q[1] * q[2];
    return (BigRational(1) / (det * det)) * h;
}

// ---- catalog -------------------------------------------------------------

namespace {

const BigRational kR0(0), kR1(1);

BigRational get_param(const Params& p, const std::string& name, const BigRational& dflt) {
    auto it = p.find(name);
    return it == p.end() ? dflt : it->second;
}

BigRational require_param(const Params& p, const std::string& family, const std::string& name) {
    auto it = p.find(name);
    if (it == p.end()) fail(Errc::bad_input, family + ": missing parameter '" + name + "'");
    return it->second;
}

SmoothMap1D from_exact_fn(RationalFn f, Interval dom, std::string label) {
    RatFnD fn = RatFnD::from_exact(f);
    return SmoothMap1D(std::move(fn), dom, std::move(label), std::move(f));
}

Poly P(std::initializer_list<BigRational> c) { return Poly(std::vector<BigRational>(c)); }

} // namespace

double elliptic_asymptote(double a, double b) {
    // largest real root of x^3 + a x + b: scan from the Cauchy bound down
    auto cubic = [&](double x) { return (x * x + a) * x + b; };
    double M = 1.0 + std::max(std::fabs(a), std::fabs(b));
    // cubic(M) > 0; walk down until the sign flips
    double hi = M, lo = M;
    const int kSteps = 4096;
    double step = 2.0 * M / kSteps;
    bool found = false;
    for (int i = 1; i <= kSteps; ++i) {
        lo = M - i * step;
        if (cubic(lo) <= 0.0) {
            found = true;
            break;
        }
        hi = lo;
    }
    if (!found) fail(Errc::bad_input, "cubic has no real root in the scan range");
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (cubic(mid) <= 0.0 ? lo : hi) = mid;
    }
    double r = 0.5 * (lo + hi);
    // Newton polish
    for (int i = 0; i < 4; ++i) {
        double d = 3 * r * r + a;
        if (d != 0.0) r -= cubic(r) / d;
    }
    return r;
}

Mobius elliptic_default_mobius(double a, double b) {
    double r = elliptic_asymptote(a, b);
    return Mobius::make(1.0 - r, r + 1.0, -1.0, 1.0);
}

const std::vector<FamilyInfo>& catalog_families() {
    static const std::vector<FamilyInfo> table = {
        {"chebyshev", "1 - 2x^2", {}, "[-1,1]", false},
        {"logistic", "4x(1-x)", {}, "[0,1]", false},
        {"katsura-fukuda", "4x(1-x)(1-lx)/(1-lx^2)^2", {"l=0"}, "[0,1]", false},
        {"elliptic", "(x^4-2ax^2-8bx+a^2)/(4(x^3+ax+b))", {"a=1", "b=1"}, "(r,inf)", false},
        {"elliptic-compact", "elliptic conjugated onto [-1,1] by the default Mobius",
         {"a=1", "b=1"}, "[-1,1]", false},
        {"linear", "lambda*y", {"lambda"}, "(-inf,inf)", false},
        {"saddle-node", "y + nu - y^2 + a*y^3", {"nu", "a=0"}, "(-inf,inf)", false},
        {"pitchfork", "y + nu*y + b*nu*y^2 - y^3 + a*y^5", {"nu", "a=0", "b=0"}, "(-inf,inf)", false},
        {"skew-tent", "nu + sl*y (y<=0) | nu + sr*y (y>=0)", {"nu", "sl", "sr"}, "(-inf,inf)", true},
        {"skew-quad", "nu + sl*y + t*y^2 (y<=0) | nu + sr*y (y>=0)", {"nu", "sl", "sr", "t=0"},
         "(-inf,inf)", true},
    };
    return table;
}

Map1D catalog_make(const std::string& family, const Params& params) {
    if (family == "chebyshev") {
        return from_exact_fn(RationalFn::from_poly(P({kR1, kR0, BigRational(-2)})),
                             Interval::closed(-1, 1), "chebyshev");
    }
    if (family == "logistic") {
        return from_exact_fn(RationalFn::from_poly(P({kR0, BigRational(4), BigRational(-4)})),
                             Interval::closed(0, 1), "logistic");
    }
    if (family == "katsura-fukuda") {
        BigRational l = get_param(params, "l", kR0);
        if (l.sign() < 0 || !(l < kR1))
            fail(Errc::bad_input, "katsura-fukuda: l must lie in [0,1)");
        Poly h = P({kR0, kR1}) * P({kR1, -kR1}) * P({kR1, -l});
        Poly q = P({kR1, kR0, -l});
        return from_exact_fn(RationalFn(BigRational(4) * h, q * q), Interval::closed(0, 1),
                             "katsura-fukuda[l=" + l.str() + "]");
    }
    if (family == "elliptic") {
        BigRational a = get_param(params, "a", kR1), b = get_param(params, "b", kR1);
        Poly num = P({a * a, BigRational(-8) * b, BigRational(-2) * a, kR0, kR1});
        Poly den = P({BigRational(4) * b, BigRational(4) * a, kR0, BigRational(4)});
        double r = elliptic_asymptote(a.to_double(), b.to_double());
        return from_exact_fn(RationalFn(num, den),
                             Interval::make(r, INFINITY, false, false),
                             "elliptic[a=" + a.str() + ",b=" + b.str() + "]");
    }
    if (family == "elliptic-compact") {
        BigRational a = get_param(params, "a", kR1), b = get_param(params, "b", kR1);
        return compactified_elliptic(a.to_double(), b.to_double()).map;
    }
    if (family == "linear") {
        BigRational lam = require_param(params, "linear", "lambda");
        return from_exact_fn(RationalFn::from_poly(P({kR0, lam})), Interval::all(),
                             "linear[lambda=" + lam.str() + "]");
    }
    if (family == "saddle-node") {
        BigRational nu = require_param(params, "saddle-node", "nu");
        BigRational a = get_param(params, "a", kR0);
        return from_exact_fn(RationalFn::from_poly(P({nu, kR1, BigRational(-1), a})),
                             Interval::all(), "saddle-node[nu=" + nu.str() + ",a=" + a.str() + "]");
    }
    if (family == "pitchfork") {
        BigRational nu = require_param(params, "pitchfork", "nu");
        BigRational a = get_param(params, "a", kR0), b = get_param(params, "b", kR0);
        return from_exact_fn(
            RationalFn::from_poly(P({kR0, kR1 + nu, b * nu, BigRational(-1), kR0, a})),
            Interval::all(),
            "pitchfork[nu=" + nu.str() + ",a=" + a.str() + ",b=" + b.str() + "]");
    }
    if (family == "skew-tent" || family == "skew-quad") {
        BigRational nu = require_param(params, family, "nu");
        BigRational sl = require_param(params, family, "sl");
        BigRational sr = require_param(params, family, "sr");
        BigRational t = family == "skew-quad" ? get_param(params, "t", kR0) : kR0;
        SmoothMap1D left = from_exact_fn(RationalFn::from_poly(P({nu, sl, t})),
                                         Interval::make(-INFINITY, 0, false, true), "left");
        SmoothMap1D right = from_exact_fn(RationalFn::from_poly(P({nu, sr})),
                                          Interval::make(0, INFINITY, true, false), "right");
        std::string label = family + "[nu=" + nu.str() + ",sl=" + sl.str() + ",sr=" + sr.str() +
                            (family == "skew-quad" ? ",t=" + t.str() : "") + "]";
        return PiecewiseMap1D(std::move(left), std::move(right), Interval::all(), label);
    }
    fail(Errc::bad_input, "unknown family: " + family);
}

CompactifiedElliptic compactified_elliptic(double a, double b) {
    Params p;
    p["a"] = BigRational::from_double(a);
    p["b"] = BigRational::from_double(b);
    SmoothMap1D raw = std::get<SmoothMap1D>(catalog_make("elliptic", p));
    Mobius m = elliptic_default_mobius(a, b);
    SmoothMap1D compact = mobius_conjugate(raw, m);
    compact = compact.with_domain(Interval::closed(-1, 1));
    // witness H = x^3 + a x + b transported to the compact coordinates
    DPoly H({b, a, 0.0, 1.0});
    CompactifiedElliptic out{std::move(compact), transport_witness(H, m), m};
    return out;
}

std::optional<DPoly> paired_witness(const std::string& family, const Params& params) {
    if (family == "chebyshev") return DPoly({1.0, 0.0, -1.0});
    if (family == "logistic") return DPoly({0.0, 1.0, -1.0});
    if (family == "katsura-fukuda") {
        double l = get_param(params, "l", kR0).to_double();
        // x(1-x)(1-lx) = x - (1+l)x^2 + l x^3
        return DPoly({0.0, 1.0, -(1.0 + l), l});
    }
    if (family == "elliptic-compact" || family == "elliptic") {
        double a = get_param(params, "a", kR1).to_double();
        double b = get_param(params, "b", kR1).to_double();
        if (family == "elliptic") return DPoly({b, a, 0.0, 1.0});
        return compactified_elliptic(a, b).witness;
    }
    return std::nullopt;
}

// ---- map-spec JSON -------------------------------------------------------

namespace {

using nlohmann::json;

BigRational rational_from_json(const json& v) {
    if (v.is_string()) return BigRational::parse(v.get<std::string>());
    if (v.is_number_integer()) return BigRational(v.get<long long>());
    if (v.is_number_float()) return BigRational::from_double(v.get<double>());
    fail(Errc::bad_input, "expected a number or rational string");
}

double interval_end_from_json(const json& v) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        return BigRational::parse(s).to_double();
    }
    if (v.is_number()) return v.get<double>();
    fail(Errc::bad_input, "bad interval endpoint");
}

RationalFn rational_fn_from_json(const json& spec) {
    if (!spec.contains("num") || !spec["num"].is_array())
        fail(Errc::bad_input, "rational spec needs a 'num' coefficient array");
    std::vector<BigRational> num, den;
    for (const auto& c : spec["num"]) num.push_back(rational_from_json(c));
    if (spec.contains("den"))
        for (const auto& c : spec["den"]) den.push_back(rational_from_json(c));
    else
        den.push_back(kR1);
    return RationalFn(Poly(std::move(num)), Poly(std::move(den)));
}

Interval interval_from_json(const json& j, Interval dflt) {
    if (!j.contains("domain")) return dflt;
    const auto& d = j["domain"];
    if (!d.is_array() || d.size() != 2) fail(Errc::bad_input, "domain must be [lo, hi]");
    double lo = interval_end_from_json(d[0]), hi = interval_end_from_json(d[1]);
    return Interval::make(lo, hi, true, true);
}

} // namespace

Map1D parse_map_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        fail(Errc::bad_input, std::string("map spec is not valid JSON: ") + e.what());
    }
    if (j.contains("family")) {
        Params params;
        if (j.contains("params")) {
            for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
                params[it.key()] = rational_from_json(it.value());
        }
        return catalog_make(j["family"].get<std::string>(), params);
    }
    if (j.contains("rational")) {
        RationalFn f = rational_fn_from_json(j["rational"]);
        Interval dom = interval_from_json(j, Interval::all());
        return from_exact_fn(std::move(f), dom, "user-rational");
    }
    if (j.contains("piecewise")) {
        const auto& pw = j["piecewise"];
        if (!pw.contains("left") || !pw.contains("right"))
            fail(Errc::bad_input, "piecewise spec needs 'left' and 'right'");
        Interval dom = interval_from_json(j, Interval::all());
        SmoothMap1D left = from_exact_fn(rational_fn_from_json(pw["left"]),
                                         Interval::make(-INFINITY, 0, false, true), "user-left");
        SmoothMap1D right = from_exact_fn(rational_fn_from_json(pw["right"]),
                                          Interval::make(0, INFINITY, true, false), "user-right");
        return PiecewiseMap1D(std::move(left), std::move(right), dom, "user-piecewise");
    }
    fail(Errc::bad_input, "map spec needs 'family', 'rational' or 'piecewise'");
}

MapFamily family_in_mu(const std::string& family, const Params& base, const std::string& mu_param) {
    MapFamily fam;
    fam.label = family + "(" + mu_param + ")";
    fam.member = [family, base, mu_param](double mu) {
        Params p = base;
        p[mu_param] = BigRational::from_double(mu);
        return catalog_make(family, p);
    };
    return fam;
}

} // namespace conj1d
