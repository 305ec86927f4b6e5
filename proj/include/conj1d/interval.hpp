#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "conj1d/error.hpp"

namespace conj1d {

// A real interval, possibly unbounded. Unbounded ends carry an explicit
// IEEE infinity, never a large finite sentinel.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_closed = true;
    bool hi_closed = true;

    static Interval closed(double a, double b) { return make(a, b, true, true); }
    static Interval open(double a, double b) { return make(a, b, false, false); }
    static Interval open_closed(double a, double b) { return make(a, b, false, true); }
    static Interval all() { return Interval{}; }

    static Interval make(double a, double b, bool lc, bool hc) {
        if (!(a < b)) fail(Errc::bad_input, "interval requires lo < hi");
        Interval iv;
        iv.lo = a;
        iv.hi = b;
        iv.lo_closed = lc && std::isfinite(a);
        iv.hi_closed = hc && std::isfinite(b);
        return iv;
    }

    bool contains(double x) const {
        if (x < lo || x > hi) return false;
        if (x == lo && !lo_closed) return false;
        if (x == hi && !hi_closed) return false;
        return true;
    }

    // true strictly inside, at distance > margin from finite ends
    bool interior(double x, double margin = 0.0) const {
        if (std::isfinite(lo) && x <= lo + margin) return false;
        if (std::isfinite(hi) && x >= hi - margin) return false;
        return true;
    }

    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    double width() const { return hi - lo; }

    double clamp(double x) const {
        if (x < lo) return lo;
        if (x > hi) return hi;
        return x;
    }

    std::string str() const;
};

inline std::string Interval::str() const {
    auto end = [](double v) {
        if (std::isinf(v)) return std::string(v < 0 ? "-inf" : "inf");
        return std::to_string(v);
    };
    return std::string(lo_closed ? "[" : "(") + end(lo) + ", " + end(hi) + (hi_closed ? "]" : ")");
}

} // namespace conj1d
