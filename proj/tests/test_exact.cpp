#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>

#include "conj1d/identities.hpp"
#include "conj1d/poly.hpp"
#include "conj1d/ratfn.hpp"

using namespace conj1d::exact;

namespace {

uint64_t rng_state = 0x9e3779b97f4a7c15ull;
uint64_t next_u64() {
    uint64_t z = (rng_state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
long long rand_ll(long long lo, long long hi) {
    return lo + static_cast<long long>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
}

BigInt rand_big(int limbs) {
    BigInt r(0);
    BigInt base(1ll << 32);
    for (int i = 0; i < limbs; ++i) r = r * base + BigInt(static_cast<long long>(next_u64() & 0xffffffffull));
    if (next_u64() & 1) r = -r;
    return r;
}

Poly rand_poly(int max_deg) {
    std::vector<BigRational> c;
    int deg = static_cast<int>(next_u64() % (max_deg + 1));
    for (int i = 0; i <= deg; ++i) c.emplace_back(rand_ll(-9, 9), rand_ll(1, 9));
    return Poly(std::move(c));
}

RationalFn rand_ratfn(int max_deg) {
    Poly den = rand_poly(max_deg);
    while (den.is_zero()) den = rand_poly(max_deg);
    return RationalFn(rand_poly(max_deg), den);
}

} // namespace

TEST_CASE("bigint matches native arithmetic on small operands") {
    for (int i = 0; i < 2000; ++i) {
        long long a = rand_ll(-1000000, 1000000);
        long long b = rand_ll(-1000000, 1000000);
        CHECK(BigInt(a) + BigInt(b) == BigInt(a + b));
        CHECK(BigInt(a) - BigInt(b) == BigInt(a - b));
        CHECK(BigInt(a) * BigInt(b) == BigInt(a * b));
        CHECK((BigInt(a) < BigInt(b)) == (a < b));
        if (b != 0) {
            CHECK(BigInt(a) / BigInt(b) == BigInt(a / b));
            CHECK(BigInt(a) % BigInt(b) == BigInt(a % b));
        }
    }
}

TEST_CASE("bigint division identity on large operands") {
    for (int i = 0; i < 400; ++i) {
        BigInt a = rand_big(1 + static_cast<int>(next_u64() % 8));
        BigInt b = rand_big(1 + static_cast<int>(next_u64() % 6));
        if (b.is_zero()) continue;
        BigInt q, r;
        BigInt::divmod(a, b, q, r);
        CHECK(q * b + r == a);
        CHECK(r.abs() < b.abs());
        if (!r.is_zero()) CHECK(r.sign() == a.sign());
    }
}

TEST_CASE("bigint decimal round trip and pow10") {
    CHECK(BigInt("123456789012345678901234567890").str() == "123456789012345678901234567890");
    CHECK(BigInt("-42").str() == "-42");
    CHECK(BigInt(0).str() == "0");
    CHECK(BigInt::pow10(9) == BigInt(1000000000ll));
    for (int i = 0; i < 100; ++i) {
        BigInt a = rand_big(5);
        CHECK(BigInt(a.str()) == a);
    }
}

TEST_CASE("bigint gcd") {
    CHECK(BigInt::gcd(BigInt(12), BigInt(18)) == BigInt(6));
    CHECK(BigInt::gcd(BigInt(0), BigInt(-7)) == BigInt(7));
    for (int i = 0; i < 200; ++i) {
        BigInt a = rand_big(3), b = rand_big(3);
        BigInt g = BigInt::gcd(a, b);
        if (g.is_zero()) continue;
        CHECK((a % g).is_zero());
        CHECK((b % g).is_zero());
    }
}

TEST_CASE("rational parsing is exact") {
    CHECK(BigRational::parse("1/4") == BigRational(1, 4));
    CHECK(BigRational::parse("-3/6") == BigRational(-1, 2));
    CHECK(BigRational::parse("0.25") == BigRational(1, 4));
    CHECK(BigRational::parse("-1.5") == BigRational(-3, 2));
    CHECK(BigRational::parse("3e-2") == BigRational(3, 100));
    CHECK(BigRational::parse("2.5e3") == BigRational(2500));
    CHECK(BigRational::from_double(0.5) == BigRational(1, 2));
    CHECK(BigRational::from_double(0.1) != BigRational(1, 10)); // binary 0.1 is not 1/10
    CHECK_THROWS(BigRational::parse("1/0"));
}

TEST_CASE("rational field axioms on random samples") {
    for (int i = 0; i < 500; ++i) {
        BigRational a(rand_ll(-50, 50), rand_ll(1, 50));
        BigRational b(rand_ll(-50, 50), rand_ll(1, 50));
        BigRational c(rand_ll(-50, 50), rand_ll(1, 50));
        CHECK((a + b) - b == a);
        CHECK(a * (b + c) == a * b + a * c);
        if (!b.is_zero()) CHECK((a / b) * b == a);
        CHECK(a.den().sign() > 0);
        CHECK(BigInt::gcd(a.num(), a.den()) == BigInt(1));
    }
}

TEST_CASE("poly arithmetic oracle values") {
    Poly h2({BigRational(1), BigRational(0), BigRational(-1)}); // 1 - x^2
    // (1-x^2)^2 = 1 - 2x^2 + x^4, by hand
    Poly sq = h2 * h2;
    CHECK(sq == Poly({BigRational(1), BigRational(0), BigRational(-2), BigRational(0), BigRational(1)}));

    // compose(x^2, 1-2x^2) = (1-2x^2)^2 = 1 - 4x^2 + 4x^4
    Poly x2({BigRational(0), BigRational(0), BigRational(1)});
    Poly t2({BigRational(1), BigRational(0), BigRational(-2)});
    CHECK(x2.compose(t2) ==
          Poly({BigRational(1), BigRational(0), BigRational(-4), BigRational(0), BigRational(4)}));
}

TEST_CASE("poly divmod and gcd") {
    Poly a = Poly({BigRational(-1), BigRational(1)}) * Poly({BigRational(2), BigRational(1)}); // (x-1)(x+2)
    Poly b = Poly({BigRational(-1), BigRational(1)}) * Poly({BigRational(3), BigRational(1)}); // (x-1)(x+3)
    CHECK(poly_gcd(a, b) == Poly({BigRational(-1), BigRational(1)}));

    for (int i = 0; i < 200; ++i) {
        Poly p = rand_poly(6), q = rand_poly(4);
        if (q.is_zero()) continue;
        Poly quo, rem;
        poly_divmod(p, q, quo, rem);
        CHECK(quo * q + rem == p);
        CHECK(rem.degree() < q.degree());
    }
}

TEST_CASE("poly random ring properties") {
    for (int i = 0; i < 200; ++i) {
        Poly p = rand_poly(6), q = rand_poly(6);
        CHECK((p + q) - q == p);
        CHECK((p * q).derivative() == p.derivative() * q + p * q.derivative());
    }
}

TEST_CASE("rational function arithmetic basics") {
    RationalFn x = RationalFn::identity();
    CHECK((x - x).is_zero());

    // 1/(1-x) * (1-x) = 1
    Poly one_minus_x({BigRational(1), BigRational(-1)});
    RationalFn f(Poly::constant(BigRational(1)), one_minus_x);
    RationalFn g = RationalFn::from_poly(one_minus_x);
    CHECK(f * g == RationalFn::constant(BigRational(1)));

    CHECK_THROWS(f / RationalFn());
}

TEST_CASE("rational function canonical form") {
    // (2x^2 - 2) / (2x - 2) reduces to x + 1 with monic denominator
    RationalFn f(Poly({BigRational(-2), BigRational(0), BigRational(2)}),
                 Poly({BigRational(-2), BigRational(2)}));
    CHECK(f.is_poly());
    CHECK(f.num() == Poly({BigRational(1), BigRational(1)}));

    for (int i = 0; i < 100; ++i) {
        RationalFn r = rand_ratfn(4);
        // canonicalizing twice equals canonicalizing once
        RationalFn again(r.num(), r.den());
        CHECK(again == r);
        CHECK(poly_gcd(r.num(), r.den()).degree() <= 0);
        if (!r.den().is_zero()) CHECK(r.den().leading() == BigRational(1));
    }
}

TEST_CASE("rational function derivative oracle values") {
    // d/dx (1 - 2x^2) = -4x
    RationalFn t2 = RationalFn::from_poly(Poly({BigRational(1), BigRational(0), BigRational(-2)}));
    CHECK(t2.derivative() == RationalFn::from_poly(Poly({BigRational(0), BigRational(-4)})));

    CHECK(RationalFn::constant(BigRational(7)).derivative().is_zero());

    // d/dx (1/x) = -1/x^2
    RationalFn inv_x(Poly::constant(BigRational(1)), Poly::identity());
    RationalFn expect(Poly::constant(BigRational(-1)),
                      Poly({BigRational(0), BigRational(0), BigRational(1)}));
    CHECK(inv_x.derivative() == expect);
}

TEST_CASE("rational function composition identities") {
    for (int i = 0; i < 60; ++i) {
        RationalFn f = rand_ratfn(3);
        CHECK(f.compose(RationalFn::identity()) == f);
        CHECK(RationalFn::identity().compose(f) == f);
    }
    for (int i = 0; i < 60; ++i) {
        RationalFn p = rand_ratfn(2), q = rand_ratfn(2);
        CHECK((p + q) - q == p);
        CHECK((p * q).derivative() == p.derivative() * q + p * q.derivative());
    }
}

TEST_CASE("composition chain rule on random samples") {
    for (int i = 0; i < 40; ++i) {
        RationalFn f = rand_ratfn(2), g = rand_ratfn(2);
        RationalFn fg = f.compose(g);
        CHECK(fg.derivative() == f.derivative().compose(g) * g.derivative());
    }
}

TEST_CASE("chebyshev identity (quarter-square witness)") {
    auto pair = chebyshev_pair();
    CHECK(verify_functional_identity(pair.F, pair.H, quarter_square()));
    // doubling one side of the witness breaks it
    Poly half_square({BigRational(0), BigRational(0), BigRational(1, 2)});
    CHECK_FALSE(verify_functional_identity(pair.F, pair.H, half_square));
}

TEST_CASE("elliptic identity at a = b = 1") {
    auto pair = elliptic_pair(BigRational(1), BigRational(1));
    CHECK(verify_functional_identity(pair.F, pair.H, quarter_square()));
    // F(0) = a^2 / (4b) = 1/4
    auto v = pair.F.eval(BigRational(0));
    REQUIRE(v.has_value());
    CHECK(*v == BigRational(1, 4));
}

TEST_CASE("logistic identity and katsura-fukuda degeneration at l = 0") {
    auto log_pair = logistic_pair();
    CHECK(verify_functional_identity(log_pair.F, log_pair.H, quarter_square()));

    auto kf0 = katsura_fukuda_pair(BigRational(0));
    CHECK(kf0.F == log_pair.F);
    CHECK(kf0.H == log_pair.H);
}

TEST_CASE("lemma suite: elliptic 25-point grid") {
    std::vector<std::vector<BigRational>> grid;
    for (long long a : {-2, -1, 1, 2, 3})
        for (long long b : {-2, -1, 1, 2, 3}) grid.push_back({BigRational(a), BigRational(b)});
    auto report = verify_lemma_suite("elliptic", grid);
    CHECK(report.items.size() == 25);
    CHECK(report.all_pass());
}

TEST_CASE("lemma suite: katsura-fukuda samples and inadmissible input") {
    std::vector<std::vector<BigRational>> samples = {
        {BigRational(0)}, {BigRational(1, 4)}, {BigRational(1, 2)},
        {BigRational(3, 4)}, {BigRational(9, 10)}};
    auto report = verify_lemma_suite("katsura-fukuda", samples);
    CHECK(report.all_pass());

    samples.push_back({BigRational(3, 2)}); // outside [0,1): reported, not fatal
    auto report2 = verify_lemma_suite("katsura-fukuda", samples);
    CHECK_FALSE(report2.all_pass());
    CHECK_FALSE(report2.items.back().admissible);
    CHECK(report2.items.size() == 6);
}

TEST_CASE("lemma suite: chebyshev and logistic singletons") {
    CHECK(verify_lemma_suite("chebyshev", {}).all_pass());
    CHECK(verify_lemma_suite("logistic", {}).all_pass());
    CHECK_THROWS(verify_lemma_suite("nosuch", {}));
}
