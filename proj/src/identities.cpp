#include "conj1d/identities.hpp"

namespace conj1d::exact {

namespace {
const BigRational kOne(1);
const BigRational kZero(0);

Poly P(std::initializer_list<BigRational> coeffs) { return Poly(std::vector<BigRational>(coeffs)); }
} // namespace

Poly quarter_square() { return P({kZero, kZero, BigRational(1, 4)}); }

IdentityPair chebyshev_pair() {
    // T2 = 1 - 2x^2, H2 = 1 - x^2
    return {RationalFn::from_poly(P({kOne, kZero, BigRational(-2)})),
            RationalFn::from_poly(P({kOne, kZero, BigRational(-1)})), "chebyshev"};
}

IdentityPair logistic_pair() {
    // F = 4x(1-x), H = x(1-x)
    return {RationalFn::from_poly(P({kZero, BigRational(4), BigRational(-4)})),
            RationalFn::from_poly(P({kZero, kOne, BigRational(-1)})), "logistic"};
}

IdentityPair katsura_fukuda_pair(const BigRational& ell) {
    // F_l = 4x(1-x)(1-lx) / (1 - l x^2)^2, H_l = x(1-x)(1-lx)
    Poly h = P({kZero, kOne}) * P({kOne, -kOne}) * P({kOne, -ell});
    Poly num = BigRational(4) * h;
    Poly q = P({kOne, kZero, -ell});
    return {RationalFn(num, q * q), RationalFn::from_poly(h), "katsura-fukuda l=" + ell.str()};
}

IdentityPair elliptic_pair(const BigRational& a, const BigRational& b) {
    // F = (x^4 - 2a x^2 - 8b x + a^2) / (4 (x^3 + a x + b)), H = x^3 + a x + b
    Poly num = P({a * a, BigRational(-8) * b, BigRational(-2) * a, kZero, kOne});
    Poly h = P({b, a, kZero, kOne});
    return {RationalFn(num, BigRational(4) * h), RationalFn::from_poly(h),
            "elliptic a=" + a.str() + " b=" + b.str()};
}

bool verify_functional_identity(const RationalFn& F, const RationalFn& H, const Poly& G) {
    RationalFn lhs = H.compose(F);
    RationalFn rhs = poly_apply(G, F.derivative()) * H;
    return (lhs - rhs).is_zero();
}

LemmaSuiteReport verify_lemma_suite(const std::string& family,
                                    const std::vector<std::vector<BigRational>>& param_samples) {
    LemmaSuiteReport report;
    report.family = family;
    const Poly G = quarter_square();

    auto run = [&](const IdentityPair& pair) {
        LemmaSuiteItem item;
        item.label = pair.label;
        item.pass = verify_functional_identity(pair.F, pair.H, G);
        if (!item.pass) item.note = "identity defect is nonzero";
        report.items.push_back(std::move(item));
    };

    if (family == "chebyshev") {
        run(chebyshev_pair());
    } else if (family == "logistic") {
        run(logistic_pair());
    } else if (family == "katsura-fukuda") {
        for (const auto& sample : param_samples) {
            if (sample.size() != 1) {
                report.items.push_back({"katsura-fukuda (bad sample arity)", false, false,
                                        "expected one parameter l"});
                continue;
            }
            const BigRational& ell = sample[0];
            if (ell.sign() < 0 || !(ell < kOne)) {
                report.items.push_back({"katsura-fukuda l=" + ell.str(), false, false,
                                        "l outside [0,1)"});
                continue;
            }
            run(katsura_fukuda_pair(ell));
        }
    } else if (family == "elliptic") {
        for (const auto& sample : param_samples) {
            if (sample.size() != 2) {
                report.items.push_back({"elliptic (bad sample arity)", false, false,
                                        "expected parameters a, b"});
                continue;
            }
            run(elliptic_pair(sample[0], sample[1]));
        }
    } else {
        fail(Errc::bad_input, "unknown identity family: " + family);
    }
    return report;
}

} // namespace conj1d::exact
