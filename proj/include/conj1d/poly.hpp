#pragma once

#include <vector>

#include "conj1d/error.hpp"
#include "conj1d/rational.hpp"

namespace conj1d::exact {

// Dense univariate polynomial, coefficients ascending by degree.
// The zero polynomial is the empty coefficient list. T is a field type:
// BigRational for the exact path, double for compiled numeric forms.
template <typename T>
struct basic_poly {
    std::vector<T> c;

    basic_poly() = default;
    basic_poly(std::initializer_list<T> init) : c(init) { normalize(); }
    explicit basic_poly(std::vector<T> coeffs) : c(std::move(coeffs)) { normalize(); }

    static basic_poly constant(const T& v) { return basic_poly(std::vector<T>{v}); }
    static basic_poly identity() { return basic_poly(std::vector<T>{T(0), T(1)}); }

    bool is_zero() const { return c.empty(); }
    // degree of the zero polynomial reported as -1
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const T& leading() const { return c.back(); }
    T coeff(size_t i) const { return i < c.size() ? c[i] : T(0); }

    void normalize() {
        while (!c.empty() && c.back() == T(0)) c.pop_back();
    }

    T eval(const T& x) const {
        T acc(0);
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }

    basic_poly derivative() const {
        if (c.size() <= 1) return {};
        std::vector<T> d(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * T(static_cast<long long>(i));
        return basic_poly(std::move(d));
    }

    friend basic_poly operator+(const basic_poly& a, const basic_poly& b) {
        std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
        for (size_t i = 0; i < a.c.size(); ++i) r[i] = r[i] + a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r[i] = r[i] + b.c[i];
        return basic_poly(std::move(r));
    }

    friend basic_poly operator-(const basic_poly& a, const basic_poly& b) {
        std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
        for (size_t i = 0; i < a.c.size(); ++i) r[i] = r[i] + a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r[i] = r[i] - b.c[i];
        return basic_poly(std::move(r));
    }

    friend basic_poly operator*(const basic_poly& a, const basic_poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r[i + j] = r[i + j] + a.c[i] * b.c[j];
        return basic_poly(std::move(r));
    }

    basic_poly operator-() const {
        basic_poly r = *this;
        for (auto& v : r.c) v = T(0) - v;
        return r;
    }

    friend basic_poly operator*(const T& s, const basic_poly& p) {
        basic_poly r = p;
        for (auto& v : r.c) v = v * s;
        r.normalize();
        return r;
    }

    friend bool operator==(const basic_poly& a, const basic_poly& b) { return a.c == b.c; }
    friend bool operator!=(const basic_poly& a, const basic_poly& b) { return !(a == b); }

    // polynomial composition this(inner), Horner in the polynomial ring
    basic_poly compose(const basic_poly& inner) const {
        basic_poly acc;
        for (size_t i = c.size(); i-- > 0;) acc = acc * inner + constant(c[i]);
        return acc;
    }

    basic_poly pow(unsigned k) const {
        basic_poly r = constant(T(1));
        basic_poly base = *this;
        while (k) {
            if (k & 1) r = r * base;
            base = base * base;
            k >>= 1;
        }
        return r;
    }
};

// Homogenized substitution: sum_i p_i N^i D^(d-i), with d >= deg p.
// Together with the matching D^d this is p(N/D) cleared of denominators.
template <typename T>
basic_poly<T> hom_substitute(const basic_poly<T>& p, const basic_poly<T>& N,
                             const basic_poly<T>& D, int d) {
    basic_poly<T> acc;
    std::vector<basic_poly<T>> dpow(static_cast<size_t>(d) + 1);
    dpow[0] = basic_poly<T>::constant(T(1));
    for (int i = 1; i <= d; ++i) dpow[i] = dpow[i - 1] * D;
    basic_poly<T> npow = basic_poly<T>::constant(T(1));
    for (int i = 0; i <= p.degree(); ++i) {
        acc = acc + basic_poly<T>::constant(p.c[i]) * npow * dpow[d - i];
        npow = npow * N;
    }
    return acc;
}

using Poly = basic_poly<BigRational>;

// Field polynomial division: a = q*b + r with deg r < deg b.
inline void poly_divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) fail(Errc::bad_input, "polynomial division by zero");
    q = {};
    r = a;
    const BigRational lead_inv = b.leading().inv();
    while (!r.is_zero() && r.degree() >= b.degree()) {
        int k = r.degree() - b.degree();
        BigRational f = r.leading() * lead_inv;
        std::vector<BigRational> term(static_cast<size_t>(k) + 1, BigRational(0));
        term.back() = f;
        Poly t(std::move(term));
        q = q + t;
        r = r - t * b;
    }
}

inline Poly monic(const Poly& p) {
    if (p.is_zero()) return p;
    return p.leading().inv() * p;
}

// gcd by monic Euclid; fine at the degrees reached here (<= ~25 after
// composition). Result is monic, or zero when both inputs are zero.
inline Poly poly_gcd(Poly a, Poly b) {
    a = monic(a);
    b = monic(b);
    while (!b.is_zero()) {
        Poly q, r;
        poly_divmod(a, b, q, r);
        a = std::move(b);
        b = monic(r);
    }
    return a;
}

} // namespace conj1d::exact
