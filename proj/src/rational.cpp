#include "conj1d/rational.hpp"

#include <cmath>

#include "conj1d/error.hpp"

namespace conj1d::exact {

BigRational::BigRational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) fail(Errc::bad_input, "rational with zero denominator");
    reduce();
}

void BigRational::reduce() {
    if (den_.sign() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (g != BigInt(1)) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
}

BigRational BigRational::parse(const std::string& raw) {
    auto first = raw.find_first_not_of(" \t");
    auto last = raw.find_last_not_of(" \t");
    if (first == std::string::npos) fail(Errc::bad_input, "empty rational literal");
    std::string s = raw.substr(first, last - first + 1);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt n(s.substr(0, slash));
        BigInt d(s.substr(slash + 1));
        return BigRational(n, d);
    }
    // decimal with optional exponent: [sign] digits [. digits] [e [sign] digits]
    std::string mant = s;
    long long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        mant = s.substr(0, epos);
        exp10 = std::stoll(s.substr(epos + 1));
    }
    auto dot = mant.find('.');
    if (dot != std::string::npos) {
        exp10 -= static_cast<long long>(mant.size() - dot - 1);
        mant = mant.substr(0, dot) + mant.substr(dot + 1);
    }
    if (mant.empty() || mant == "-" || mant == "+") fail(Errc::bad_input, "bad rational literal: " + s);
    BigInt n(mant);
    if (exp10 >= 0) return BigRational(n * BigInt::pow10(static_cast<unsigned>(exp10)), BigInt(1));
    return BigRational(n, BigInt::pow10(static_cast<unsigned>(-exp10)));
}

BigRational BigRational::from_double(double v) {
    if (!std::isfinite(v)) fail(Errc::bad_input, "non-finite value has no rational form");
    if (v == 0.0) return BigRational();
    int e = 0;
    double m = std::frexp(v, &e); // v = m * 2^e, |m| in [0.5, 1)
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    e -= 53;
    BigInt n(mant), two(2);
    BigInt d(1);
    if (e >= 0) {
        for (int i = 0; i < e; ++i) n = n * two;
    } else {
        for (int i = 0; i < -e; ++i) d = d * two;
    }
    return BigRational(n, d);
}

BigRational operator+(const BigRational& a, const BigRational& b) {
    return BigRational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

BigRational operator-(const BigRational& a, const BigRational& b) {
    return BigRational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

BigRational operator*(const BigRational& a, const BigRational& b) {
    return BigRational(a.num_ * b.num_, a.den_ * b.den_);
}

BigRational operator/(const BigRational& a, const BigRational& b) {
    if (b.is_zero()) fail(Errc::bad_input, "rational division by zero");
    return BigRational(a.num_ * b.den_, a.den_ * b.num_);
}

BigRational BigRational::operator-() const {
    BigRational r = *this;
    r.num_ = -r.num_;
    return r;
}

bool operator<(const BigRational& a, const BigRational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
}

BigRational BigRational::inv() const {
    if (is_zero()) fail(Errc::bad_input, "inverse of zero");
    return BigRational(den_, num_);
}

double BigRational::to_double() const {
    if (num_.is_zero()) return 0.0;
    // scale both parts into double range before dividing
    long long nb = static_cast<long long>(num_.bit_length());
    long long db = static_cast<long long>(den_.bit_length());
    if (nb < 900 && db < 900) return num_.to_double() / den_.to_double();
    double n = num_.to_double();
    double d = den_.to_double();
    if (std::isfinite(n) && std::isfinite(d) && d != 0.0) return n / d;
    // extreme magnitudes: work with explicit exponents
    int shift = static_cast<int>(std::max(nb, db) - 512);
    BigInt sn = num_, sd = den_;
    BigInt two(2);
    BigInt p(1);
    for (int i = 0; i < shift; ++i) p = p * two;
    sn = sn / p;
    sd = sd / p;
    if (sd.is_zero()) return num_.sign() > 0 ? HUGE_VAL : -HUGE_VAL;
    return sn.to_double() / sd.to_double();
}

std::string BigRational::str() const {
    if (is_integer()) return num_.str();
    return num_.str() + "/" + den_.str();
}

} // namespace conj1d::exact
