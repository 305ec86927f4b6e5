#pragma once

#include <string>
#include <vector>

#include "conj1d/ratfn.hpp"

namespace conj1d::exact {

// A map F paired with the function H that witnesses its multiplier
// structure through H(F(x)) = G(F'(x)) H(x).
struct IdentityPair {
    RationalFn F;
    RationalFn H;
    std::string label;
};

// G(z) = z^2/4, the witness polynomial every built-in pair satisfies.
Poly quarter_square();

// Built-in pairs. Parameters are exact rationals.
IdentityPair chebyshev_pair();
IdentityPair logistic_pair();
IdentityPair katsura_fukuda_pair(const BigRational& ell);          // requires 0 <= ell < 1
IdentityPair elliptic_pair(const BigRational& a, const BigRational& b);

// Decides H(F(x)) - G(F'(x)) H(x) == 0 in Q(x). No tolerances anywhere.
bool verify_functional_identity(const RationalFn& F, const RationalFn& H, const Poly& G);

struct LemmaSuiteItem {
    std::string label;
    bool admissible = true;
    bool pass = false;
    std::string note;
};

struct LemmaSuiteReport {
    std::string family;
    std::vector<LemmaSuiteItem> items;
    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return !items.empty();
    }
};

// family: "elliptic" (samples are (a,b) pairs), "katsura-fukuda" (samples are
// single ell values), "chebyshev" or "logistic" (samples ignored, one item).
LemmaSuiteReport verify_lemma_suite(const std::string& family,
                                    const std::vector<std::vector<BigRational>>& param_samples);

} // namespace conj1d::exact
