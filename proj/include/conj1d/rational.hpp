#pragma once

#include <string>

#include "conj1d/bigint.hpp"

namespace conj1d::exact {

// Rational number kept in lowest terms with a positive denominator.
class BigRational {
public:
    BigRational() : num_(0), den_(1) {}
    BigRational(long long v) : num_(v), den_(1) {}
    BigRational(BigInt n, BigInt d);
    BigRational(long long n, long long d) : BigRational(BigInt(n), BigInt(d)) {}

    // Accepts "p/q", decimal ("-1.25", "3e-2") and plain integers, all exact.
    static BigRational parse(const std::string& s);
    // Exact value of a finite double (doubles are dyadic rationals).
    static BigRational from_double(double v);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }
    bool is_integer() const { return den_ == BigInt(1); }

    friend BigRational operator+(const BigRational& a, const BigRational& b);
    friend BigRational operator-(const BigRational& a, const BigRational& b);
    friend BigRational operator*(const BigRational& a, const BigRational& b);
    friend BigRational operator/(const BigRational& a, const BigRational& b);
    BigRational operator-() const;

    BigRational& operator+=(const BigRational& b) { return *this = *this + b; }
    BigRational& operator-=(const BigRational& b) { return *this = *this - b; }
    BigRational& operator*=(const BigRational& b) { return *this = *this * b; }
    BigRational& operator/=(const BigRational& b) { return *this = *this / b; }

    friend bool operator==(const BigRational& a, const BigRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return !(a == b); }
    friend bool operator<(const BigRational& a, const BigRational& b);

    BigRational inv() const;
    double to_double() const;
    std::string str() const; // "p/q" or "p" when integral

private:
    BigInt num_, den_;
    void reduce();
};

} // namespace conj1d::exact
