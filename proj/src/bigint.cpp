#include "conj1d/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "conj1d/error.hpp"

namespace conj1d::exact {

namespace {
constexpr uint64_t kBase = 1ull << 32;
}

BigInt::BigInt(long long v) {
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    // avoid UB on LLONG_MIN
    uint64_t m = v < 0 ? ~static_cast<uint64_t>(v) + 1 : static_cast<uint64_t>(v);
    mag_.push_back(static_cast<uint32_t>(m & 0xffffffffu));
    if (m >> 32) mag_.push_back(static_cast<uint32_t>(m >> 32));
}

BigInt::BigInt(const std::string& decimal) {
    size_t i = 0;
    int sg = 1;
    if (i < decimal.size() && (decimal[i] == '+' || decimal[i] == '-')) {
        if (decimal[i] == '-') sg = -1;
        ++i;
    }
    if (i >= decimal.size()) fail(Errc::bad_input, "empty integer literal");
    BigInt acc;
    BigInt ten(10);
    for (; i < decimal.size(); ++i) {
        char c = decimal[i];
        if (c < '0' || c > '9') fail(Errc::bad_input, "bad digit in integer literal: " + decimal);
        acc = acc * ten + BigInt(c - '0');
    }
    *this = acc;
    if (sg < 0) sign_ = -sign_;
}

BigInt BigInt::pow10(unsigned k) {
    BigInt r(1), ten(10);
    for (unsigned i = 0; i < k; ++i) r = r * ten;
    return r;
}

void BigInt::trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    const auto& x = a.size() >= b.size() ? a : b;
    const auto& y = a.size() >= b.size() ? b : a;
    std::vector<uint32_t> r(x.size() + 1, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        uint64_t s = carry + x[i] + (i < y.size() ? y[i] : 0u);
        r[i] = static_cast<uint32_t>(s & 0xffffffffu);
        carry = s >> 32;
    }
    r[x.size()] = static_cast<uint32_t>(carry);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r(a.size(), 0);
    int64_t borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        int64_t d = static_cast<int64_t>(a[i]) - (i < b.size() ? static_cast<int64_t>(b[i]) : 0) - borrow;
        if (d < 0) {
            d += static_cast<int64_t>(kBase);
            borrow = 1;
        } else {
            borrow = 0;
        }
        r[i] = static_cast<uint32_t>(d);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint32_t> r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        uint64_t carry = 0;
        uint64_t ai = a[i];
        for (size_t j = 0; j < b.size(); ++j) {
            uint64_t t = ai * b[j] + r[i + j] + carry;
            r[i + j] = static_cast<uint32_t>(t & 0xffffffffu);
            carry = t >> 32;
        }
        size_t k = i + b.size();
        while (carry) {
            uint64_t t = r[k] + carry;
            r[k] = static_cast<uint32_t>(t & 0xffffffffu);
            carry = t >> 32;
            ++k;
        }
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<uint32_t> BigInt::shl(const std::vector<uint32_t>& a, unsigned bits) {
    if (a.empty() || bits == 0) return a;
    unsigned limbs = bits / 32, s = bits % 32;
    std::vector<uint32_t> r(a.size() + limbs + 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        uint64_t v = static_cast<uint64_t>(a[i]) << s;
        r[i + limbs] |= static_cast<uint32_t>(v & 0xffffffffu);
        r[i + limbs + 1] |= static_cast<uint32_t>(v >> 32);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<uint32_t> BigInt::shr(const std::vector<uint32_t>& a, unsigned bits) {
    unsigned limbs = bits / 32, s = bits % 32;
    if (limbs >= a.size()) return {};
    std::vector<uint32_t> r(a.size() - limbs, 0);
    for (size_t i = 0; i < r.size(); ++i) {
        uint64_t v = a[i + limbs] >> s;
        if (s && i + limbs + 1 < a.size()) v |= static_cast<uint64_t>(a[i + limbs + 1]) << (32 - s);
        r[i] = static_cast<uint32_t>(v & 0xffffffffu);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

uint32_t BigInt::divmod_small(std::vector<uint32_t>& u, uint32_t d) {
    uint64_t rem = 0;
    for (size_t i = u.size(); i-- > 0;) {
        uint64_t cur = (rem << 32) | u[i];
        u[i] = static_cast<uint32_t>(cur / d);
        rem = cur % d;
    }
    while (!u.empty() && u.back() == 0) u.pop_back();
    return static_cast<uint32_t>(rem);
}

// Knuth TAOCP vol 2, algorithm 4.3.1 D.
void BigInt::divmod_mag(const std::vector<uint32_t>& u, const std::vector<uint32_t>& v,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
    if (v.empty()) fail(Errc::bad_input, "division by zero");
    if (cmp_mag(u, v) < 0) {
        q.clear();
        r = u;
        return;
    }
    if (v.size() == 1) {
        q = u;
        uint32_t rem = divmod_small(q, v[0]);
        r.clear();
        if (rem) r.push_back(rem);
        return;
    }

    unsigned s = 0;
    for (uint32_t top = v.back(); !(top & 0x80000000u); top <<= 1) ++s;
    std::vector<uint32_t> vn = shl(v, s);
    std::vector<uint32_t> un = shl(u, s);
    size_t n = vn.size(), m = un.size() >= n ? un.size() - n : 0;
    un.resize(un.size() + 1, 0); // room for the virtual high limb

    q.assign(m + 1, 0);
    const uint64_t vtop = vn[n - 1], vsecond = vn[n - 2];
    for (size_t j = m + 1; j-- > 0;) {
        uint64_t num = (static_cast<uint64_t>(un[j + n]) << 32) | un[j + n - 1];
        uint64_t qhat = num / vtop;
        uint64_t rhat = num % vtop;
        while (qhat >= kBase || qhat * vsecond > ((rhat << 32) | un[j + n - 2])) {
            --qhat;
            rhat += vtop;
            if (rhat >= kBase) break;
        }
        // multiply-subtract qhat * vn from un[j .. j+n]
        int64_t borrow = 0;
        uint64_t carry = 0;
        for (size_t i = 0; i < n; ++i) {
            uint64_t p = qhat * vn[i] + carry;
            carry = p >> 32;
            int64_t t = static_cast<int64_t>(un[i + j]) - static_cast<int64_t>(p & 0xffffffffu) - borrow;
            if (t < 0) {
                t += static_cast<int64_t>(kBase);
                borrow = 1;
            } else {
                borrow = 0;
            }
            un[i + j] = static_cast<uint32_t>(t);
        }
        int64_t t = static_cast<int64_t>(un[j + n]) - static_cast<int64_t>(carry) - borrow;
        if (t < 0) {
            // qhat one too large: add back
            t += static_cast<int64_t>(kBase);
            --qhat;
            uint64_t c2 = 0;
            for (size_t i = 0; i < n; ++i) {
                uint64_t sum = static_cast<uint64_t>(un[i + j]) + vn[i] + c2;
                un[i + j] = static_cast<uint32_t>(sum & 0xffffffffu);
                c2 = sum >> 32;
            }
            t += static_cast<int64_t>(c2);
            t &= static_cast<int64_t>(kBase) - 1;
        }
        un[j + n] = static_cast<uint32_t>(t);
        q[j] = static_cast<uint32_t>(qhat);
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    un.resize(n);
    r = shr(un, s);
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
        r.mag_ = BigInt::add_mag(a.mag_, b.mag_);
        r.sign_ = a.sign_;
    } else {
        int c = BigInt::cmp_mag(a.mag_, b.mag_);
        if (c == 0) return BigInt();
        if (c > 0) {
            r.mag_ = BigInt::sub_mag(a.mag_, b.mag_);
            r.sign_ = a.sign_;
        } else {
            r.mag_ = BigInt::sub_mag(b.mag_, a.mag_);
            r.sign_ = b.sign_;
        }
    }
    r.trim();
    return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
    BigInt r;
    r.mag_ = BigInt::mul_mag(a.mag_, b.mag_);
    r.sign_ = a.sign_ * b.sign_;
    r.trim();
    return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.sign_ == 0) fail(Errc::bad_input, "division by zero");
    BigInt qq, rr;
    divmod_mag(a.mag_, b.mag_, qq.mag_, rr.mag_);
    qq.sign_ = qq.mag_.empty() ? 0 : a.sign_ * b.sign_;
    rr.sign_ = rr.mag_.empty() ? 0 : a.sign_;
    q = std::move(qq);
    r = std::move(rr);
}

BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return r;
}

bool operator==(const BigInt& a, const BigInt& b) {
    return a.sign_ == b.sign_ && a.mag_ == b.mag_;
}

bool operator<(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    int c = BigInt::cmp_mag(a.mag_, b.mag_);
    return a.sign_ >= 0 ? c < 0 : c > 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    while (!b.is_zero()) {
        BigInt r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

std::string BigInt::str() const {
    if (sign_ == 0) return "0";
    std::vector<uint32_t> m = mag_;
    std::string out;
    while (!m.empty()) {
        uint32_t chunk = divmod_small(m, 1000000000u);
        if (m.empty()) {
            out = std::to_string(chunk) + out;
        } else {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%09u", chunk);
            out = buf + out;
        }
    }
    return sign_ < 0 ? "-" + out : out;
}

double BigInt::to_double() const {
    if (sign_ == 0) return 0.0;
    // take the top 64 bits, then scale by the remaining limb count
    double v = 0.0;
    size_t n = mag_.size();
    size_t take = std::min<size_t>(n, 3);
    for (size_t i = 0; i < take; ++i)
        v = v * static_cast<double>(kBase) + static_cast<double>(mag_[n - 1 - i]);
    v = std::ldexp(v, 32 * static_cast<int>(n - take));
    return sign_ < 0 ? -v : v;
}

size_t BigInt::bit_length() const {
    if (mag_.empty()) return 0;
    uint32_t top = mag_.back();
    size_t bits = 0;
    while (top) {
        ++bits;
        top >>= 1;
    }
    return bits + 32 * (mag_.size() - 1);
}

bool BigInt::fits_int64(long long& out) const {
    if (mag_.size() > 2) return false;
    uint64_t m = 0;
    if (mag_.size() >= 1) m = mag_[0];
    if (mag_.size() == 2) m |= static_cast<uint64_t>(mag_[1]) << 32;
    if (m > (1ull << 62)) return false;
    out = static_cast<long long>(m) * sign_;
    return true;
}

} // namespace conj1d::exact
