#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conj1d/interval.hpp"
#include "conj1d/poly.hpp"
#include "conj1d/ratfn.hpp"

namespace conj1d {

using DPoly = exact::basic_poly<double>;

// Numeric rational function num/den with precomputed derivative numerators:
// f^(k) = p_k / den^(k+1) with p_(k+1) = p_k' den - (k+1) p_k den'.
// Keeping den un-squared this way avoids the degree blow-up of the raw
// quotient rule and stays stable on unbounded domains.
struct RatFnD {
    DPoly num, den;
    std::array<DPoly, 3> dnum; // p_1, p_2, p_3

    RatFnD() = default;
    RatFnD(DPoly n, DPoly d);
    static RatFnD from_exact(const exact::RationalFn& f);

    bool is_poly() const { return den.degree() <= 0; }
    double eval(double x) const;
    double deriv(double x, int order) const; // order in 1..3
    // den(x) with a relative pole guard; throws Errc::pole when |den| is
    // negligible against the coefficient scale at x
    double den_at(double x) const;
};

class SmoothMap1D {
public:
    SmoothMap1D() = default;
    SmoothMap1D(RatFnD fn, Interval domain, std::string label,
                std::optional<exact::RationalFn> exact_form = std::nullopt);

    double eval(double x) const;            // domain-checked
    double deriv(double x, int order) const;
    double eval_unchecked(double x) const { return fn_.eval(x); }
    double deriv_unchecked(double x, int order) const { return fn_.deriv(x, order); }

    const Interval& domain() const { return domain_; }
    const RatFnD& fn() const { return fn_; }
    const std::optional<exact::RationalFn>& exact_form() const { return exact_; }
    const std::string& label() const { return label_; }

    SmoothMap1D with_domain(Interval d) const;

private:
    RatFnD fn_;
    Interval domain_ = Interval::all();
    std::optional<exact::RationalFn> exact_;
    std::string label_;
};

// Two smooth branches joined continuously at a kink pinned to x = 0.
class PiecewiseMap1D {
public:
    PiecewiseMap1D() = default;
    PiecewiseMap1D(SmoothMap1D left, SmoothMap1D right, Interval domain, std::string label);

    double eval(double x) const;
    const SmoothMap1D& left() const { return left_; }
    const SmoothMap1D& right() const { return right_; }
    const Interval& domain() const { return domain_; }
    const std::string& label() const { return label_; }
    // branch-resolved derivative: left for x < 0, right for x >= 0
    double deriv(double x, int order) const;

private:
    SmoothMap1D left_, right_;
    Interval domain_;
    std::string label_;
};

using Map1D = std::variant<SmoothMap1D, PiecewiseMap1D>;

double map_eval(const Map1D& m, double x);
double map_deriv(const Map1D& m, double x, int order);
const Interval& map_domain(const Map1D& m);
const std::string& map_label(const Map1D& m);

// Real fractional-linear transformation x -> (alpha x + beta)/(gamma x + delta).
struct Mobius {
    double alpha = 1, beta = 0, gamma = 0, delta = 1;
    std::optional<std::array<exact::BigRational, 4>> exact;

    static Mobius identity() { return {}; }
    static Mobius make(double a, double b, double c, double d);
    static Mobius make_exact(exact::BigRational a, exact::BigRational b,
                             exact::BigRational c, exact::BigRational d);

    double det() const { return alpha * delta - beta * gamma; }
    double eval(double x) const;
    double deriv(double x) const;
    Mobius inverse() const;
};

// m^-1 ∘ map ∘ m with the domain transported through m^-1. Rational maps
// with an exact Möbius stay exactly rational.
SmoothMap1D mobius_conjugate(const SmoothMap1D& map, const Mobius& m);

// Pushes a multiplier witness H through a Möbius change of variable:
// H_m = (H ∘ m) / (m')^2, polynomial again whenever deg H <= 4.
DPoly transport_witness(const DPoly& H, const Mobius& m);
exact::Poly transport_witness_exact(const exact::Poly& H, const Mobius& m);

// ---- catalog ----------------------------------------------------------

using Params = std::map<std::string, exact::BigRational>;

struct FamilyInfo {
    std::string name;
    std::string form;                 // human-readable closed form
    std::vector<std::string> params;  // "name" or "name=default"
    std::string domain;
    bool piecewise = false;
};

const std::vector<FamilyInfo>& catalog_families();

// Builds the named family member. Unknown families and out-of-range
// parameters raise Errc::bad_input.
Map1D catalog_make(const std::string& family, const Params& params);

// Largest real root of x^3 + a x + b (the elliptic map's vertical asymptote).
double elliptic_asymptote(double a, double b);

// The recorded default compactification m(x) = (r+1 + (1-r)x)/(1-x),
// sending -1 -> r and 1 -> +inf; r is the asymptote of the (a,b) member.
Mobius elliptic_default_mobius(double a, double b);

// Compactified elliptic map on [-1,1] together with its transported witness.
struct CompactifiedElliptic {
    SmoothMap1D map;
    DPoly witness;
    Mobius mobius;
};
CompactifiedElliptic compactified_elliptic(double a, double b);

// Multiplier witness H paired with a catalog family by the identity suite,
// as a compiled numeric polynomial (empty optional when none is known).
std::optional<DPoly> paired_witness(const std::string& family, const Params& params);

// ---- map-spec JSON ----------------------------------------------------

// {"family": name, "params": {...}}
//   | {"rational": {"num": [...], "den": [...]}, "domain": [lo, hi]}
//   | {"piecewise": {"left": <rational>, "right": <rational>}, "domain": [lo, hi]}
// Coefficients and parameter values may be JSON numbers (converted exactly)
// or strings ("1/3", "0.25") parsed as exact rationals.
Map1D parse_map_spec(const std::string& json_text);

// A one-parameter family for the fitting layer: member(mu) instantiates a
// catalog family with one designated parameter driven by mu.
struct MapFamily {
    std::string label;
    std::function<Map1D(double)> member;
};
MapFamily family_in_mu(const std::string& family, const Params& base, const std::string& mu_param);

} // namespace conj1d
