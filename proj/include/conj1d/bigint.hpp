#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace conj1d::exact {

// Arbitrary-precision signed integer, sign-magnitude with 32-bit limbs
// (little-endian, no leading zero limbs). Sized for what the identity
// verifier needs: polynomial coefficients up to a few thousand bits,
// schoolbook multiplication throughout.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v);
    explicit BigInt(const std::string& decimal);

    static BigInt pow10(unsigned k);

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }
    bool is_odd() const { return sign_ != 0 && (mag_[0] & 1u); }

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);
    // Truncated division (C semantics): quotient rounds toward zero,
    // remainder has the sign of the dividend.
    friend BigInt operator/(const BigInt& a, const BigInt& b);
    friend BigInt operator%(const BigInt& a, const BigInt& b);
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

    BigInt& operator+=(const BigInt& b) { return *this = *this + b; }
    BigInt& operator-=(const BigInt& b) { return *this = *this - b; }
    BigInt& operator*=(const BigInt& b) { return *this = *this * b; }

    friend bool operator==(const BigInt& a, const BigInt& b);
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b);
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    static BigInt gcd(BigInt a, BigInt b); // nonnegative

    std::string str() const;
    double to_double() const;
    size_t bit_length() const;

    // true and sets out when the value fits in [-2^62, 2^62]; used by fast paths
    bool fits_int64(long long& out) const;

private:
    int sign_ = 0;                // -1, 0, +1
    std::vector<uint32_t> mag_;   // empty iff sign_ == 0

    void trim();
    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    // requires |a| >= |b|
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static void divmod_mag(const std::vector<uint32_t>& u, const std::vector<uint32_t>& v,
                           std::vector<uint32_t>& q, std::vector<uint32_t>& r);
    static uint32_t divmod_small(std::vector<uint32_t>& u, uint32_t d); // in place, returns remainder
    static std::vector<uint32_t> shl(const std::vector<uint32_t>& a, unsigned bits);
    static std::vector<uint32_t> shr(const std::vector<uint32_t>& a, unsigned bits);
};

} // namespace conj1d::exact
