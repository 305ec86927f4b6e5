#pragma once

#include <stdexcept>
#include <string>

namespace conj1d {

// Error taxonomy. The CLI maps DomainError/BadInput to usage errors (exit 2)
// and everything downstream of a failed computation to exit 1.
enum class Errc {
    bad_input,         // malformed spec, unknown family, parameter out of range
    domain,            // evaluation outside a map's domain
    pole,              // evaluation at (or too close to) a pole
    not_an_orbit,      // points handed in do not close up under the map
    nonhyperbolic,     // |multiplier| too close to 1 (or 0) for linearization
    assumption,        // a bifurcation-form assumption check failed
    no_convergence,    // an iteration cap was hit
    mismatch,          // multipliers or ranges that must agree do not
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace conj1d
