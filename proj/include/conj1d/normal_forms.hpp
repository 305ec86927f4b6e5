#pragma once

#include <string>

#include "conj1d/maps.hpp"

namespace conj1d {

// Saddle-node assumption check at (x, mu) = (0, 0), after the sign
// normalizations x -> -x and/or mu -> -mu when they produce the required
// signs. The returned family has the substitutions already applied.
struct SNAssumptions {
    MapFamily normalized;
    bool flipped_x = false;
    bool flipped_mu = false;
    double f_at_origin = 0;
    double fx = 0;   // must be 1
    double fmu = 0;  // must be > 0
    double fxx = 0;  // must be < 0
    double fxxx = 0;
    double g0 = 0;   // 2 fxxx / (3 fxx^2), the fitted-cubic-coefficient limit
};

SNAssumptions check_sn_assumptions(const MapFamily& f);

struct SNMultipliers {
    double lambda_plus = 0;  // repelling branch, > 1
    double lambda_minus = 0; // attracting branch, < 1
    double x_plus = 0, x_minus = 0;
    double series_plus = 0, series_minus = 0; // O(mu^{3/2}) prediction
};

// Exact numeric multipliers of the two fixed points born at a saddle-node,
// plus the asymptotic-series cross-check.
SNMultipliers sn_multipliers(const MapFamily& f, double mu);

struct SNFit {
    double mu = 0;
    double nu = 0; // fitted F(mu)
    double a = 0;  // fitted G(mu)
    double multiplier_residual = 0;
    bool flipped_x = false, flipped_mu = false;
};

// Solves lambda+-(mu) = sigma+-(nu, a) for the extended normal form
// y + nu - y^2 + a y^3 by damped 2D Newton on exact numeric multipliers.
SNFit sn_fit(const MapFamily& f, double mu);

struct PFFit {
    double mu = 0;
    double nu = 0, a = 0, b = 0;
    double residual = 0; // max of the three multiplier residuals
};

// Matches the three fixed-point multipliers of a pitchfork family to
// y + nu y + b nu y^2 - y^3 + a y^5 by damped 3D Newton.
PFFit pf_fit(const MapFamily& f, double mu);

struct BCAssumptions {
    double a_L = 0; // must be > 1
    double a_R = 0; // must lie in (0, 1)
    double beta = 0; // must be > 0
    double fxx_L = 0, fxx_R = 0;
    double g0 = 0;  // mu -> 0 limit of the fitted quadratic coefficient t
};

BCAssumptions check_bc_assumptions(const MapFamily& f);

struct BCMultipliers {
    double lambda_L = 0, lambda_R = 0;
    double slope_ratio = 0; // S(mu) at the kink
    double x_L = 0, x_R = 0;
};

BCMultipliers bc_multipliers(const MapFamily& f, double mu);

struct BCFit {
    double mu = 0;
    double s_L = 0, s_R = 0, t = 0; // nu = mu by the scaling property
    double residual_L = 0, residual_R = 0, residual_slope = 0;
};

// nu = mu, s_R = lambda_R, s_L = S * s_R, then 1D Newton in t so the left
// fixed point of the quadratic skew form has multiplier lambda_L.
BCFit bc_fit(const MapFamily& f, double mu);

// Aitken extrapolation of fits at a geometric mu ladder (v1, v2, v3 listed
// from the largest mu down); exact for power-law convergence.
double aitken_extrapolate(double v1, double v2, double v3);

} // namespace conj1d
