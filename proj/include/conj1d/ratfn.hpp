#pragma once

#include <optional>
#include <string>

#include "conj1d/poly.hpp"

namespace conj1d::exact {

// Quotient of polynomials over the rationals, always canonical:
// gcd(num, den) = 1 and den monic. Zero is 0/1.
class RationalFn {
public:
    RationalFn() : num_(), den_(Poly::constant(BigRational(1))) {}
    RationalFn(Poly num, Poly den);

    static RationalFn from_poly(Poly p) { return RationalFn(std::move(p), Poly::constant(BigRational(1))); }
    static RationalFn identity() { return from_poly(Poly::identity()); }
    static RationalFn constant(BigRational v) { return from_poly(Poly::constant(std::move(v))); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_poly() const { return den_.degree() == 0; }

    friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator/(const RationalFn& a, const RationalFn& b);
    RationalFn operator-() const { return RationalFn(-num_, den_); }

    friend bool operator==(const RationalFn& a, const RationalFn& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFn& a, const RationalFn& b) { return !(a == b); }

    // exact evaluation; nullopt at a pole of the reduced form
    std::optional<BigRational> eval(const BigRational& x) const;

    RationalFn derivative() const;
    // this(inner); undefined (error) when the denominator vanishes identically on inner
    RationalFn compose(const RationalFn& inner) const;

    std::string str() const;

private:
    Poly num_, den_;
};

// rf_* names mirror the operation vocabulary used by the verifier layer.
inline RationalFn rf_add(const RationalFn& a, const RationalFn& b) { return a + b; }
inline RationalFn rf_sub(const RationalFn& a, const RationalFn& b) { return a - b; }
inline RationalFn rf_mul(const RationalFn& a, const RationalFn& b) { return a * b; }
inline RationalFn rf_div(const RationalFn& a, const RationalFn& b) { return a / b; }
inline RationalFn rf_compose(const RationalFn& outer, const RationalFn& inner) { return outer.compose(inner); }
inline RationalFn rf_derivative(const RationalFn& f) { return f.derivative(); }

// Substitute a rational function into a polynomial, exactly.
RationalFn poly_apply(const Poly& g, const RationalFn& v);

} // namespace conj1d::exact
