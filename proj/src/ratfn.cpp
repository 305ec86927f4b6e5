#include "conj1d/ratfn.hpp"

namespace conj1d::exact {

RationalFn::RationalFn(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) fail(Errc::bad_input, "rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = Poly::constant(BigRational(1));
        return;
    }
    Poly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
        Poly q, r;
        poly_divmod(num_, g, q, r);
        num_ = std::move(q);
        poly_divmod(den_, g, q, r);
        den_ = std::move(q);
    }
    BigRational lead_inv = den_.leading().inv();
    num_ = lead_inv * num_;
    den_ = lead_inv * den_;
}

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFn operator-(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFn operator/(const RationalFn& a, const RationalFn& b) {
    if (b.is_zero()) fail(Errc::bad_input, "division by the zero rational function");
    return RationalFn(a.num_ * b.den_, a.den_ * b.num_);
}

std::optional<BigRational> RationalFn::eval(const BigRational& x) const {
    BigRational d = den_.eval(x);
    if (d.is_zero()) return std::nullopt;
    return num_.eval(x) / d;
}

RationalFn RationalFn::derivative() const {
    return RationalFn(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RationalFn RationalFn::compose(const RationalFn& inner) const {
    int d = std::max(num_.degree(), den_.degree());
    if (d <= 0) return *this; // constant (or zero) outer
    Poly a = hom_substitute(num_, inner.num_, inner.den_, d);
    Poly b = hom_substitute(den_, inner.num_, inner.den_, d);
    if (b.is_zero()) fail(Errc::bad_input, "composition hits a pole identically");
    return RationalFn(std::move(a), std::move(b));
}

RationalFn poly_apply(const Poly& g, const RationalFn& v) {
    int d = g.degree();
    if (d <= 0) return RationalFn::from_poly(g);
    Poly a = hom_substitute(g, v.num(), v.den(), d);
    Poly b = v.den().pow(static_cast<unsigned>(d));
    return RationalFn(std::move(a), std::move(b));
}

std::string RationalFn::str() const {
    auto poly_str = [](const Poly& p) {
        if (p.is_zero()) return std::string("0");
        std::string s;
        for (int i = p.degree(); i >= 0; --i) {
            BigRational c = p.coeff(static_cast<size_t>(i));
            if (c.is_zero()) continue;
            if (!s.empty()) s += c.sign() > 0 ? " + " : " - ";
            else if (c.sign() < 0) s += "-";
            BigRational a = c.sign() < 0 ? -c : c;
            bool unit = a == BigRational(1);
            if (i == 0 || !unit) s += a.str();
            if (i > 0) {
                if (!unit) s += "*";
                s += "x";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    };
    if (is_poly()) return poly_str(num_);
    return "(" + poly_str(num_) + ") / (" + poly_str(den_) + ")";
}

} // namespace conj1d::exact
