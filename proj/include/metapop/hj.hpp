#pragma once

#include <vector>

#include "metapop/ess.hpp"
#include "metapop/model.hpp"

namespace metapop {

// Limit log-density profile: u <= 0 everywhere, u = 0 exactly on the ESS
// support; elsewhere u(z) = -|integral of sqrt(-W) from the nearest-in-value
// support point|.
struct UProfile {
    std::vector<double> z;
    std::vector<double> u;
    std::vector<double> support; // anchor points the profile was built from
};

// Fourth-order Taylor data of u at a support point:
//   u(z) = -A/2 s^2 + B s^3 + C s^4 + O(s^5),  s = z - z_star,  A > 0.
struct UTaylor {
    double z_star = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

struct UProfileOptions {
    double quad_tol = 1e-12;     // absolute adaptive-quadrature tolerance per cell
    bool insert_support = true;  // add the support points to the output grid
    double fitness_tol = 1e-8;   // max admissible positive fitness excursion
};

// Uniform grid of n points on [-theta-3, theta+3].
std::vector<double> default_grid(const ModelParams& p, int n = 4001);

UProfile u_profile_monomorphic(const std::vector<double>& grid, const Ess& ess,
                               const ModelParams& p,
                               const UProfileOptions& opt = {});
UProfile u_profile_dimorphic(const std::vector<double>& grid, const Ess& ess,
                             const ModelParams& p,
                             const UProfileOptions& opt = {});
UProfile u_profile(const std::vector<double>& grid, const Ess& ess,
                   const ModelParams& p, const UProfileOptions& opt = {});

// Taylor data from analytic differentiation of the closed-form fitness
// (truncated series arithmetic); requires two-way migration and a
// non-degenerate quadratic fitness maximum at z_star.
UTaylor u_taylor(double z_star, const PopState& N_star, const ModelParams& p);

// One-way regime. u1 is exactly the habitat-1 parabola
// -sqrt(g1)/2 (z+theta)^2. For habitat 2 only local behavior and an upper
// bound are available: near -theta u2 equals the habitat-1 parabola; near
// +theta it equals -sqrt(g2)/2 (z-theta)^2 when the sink is dimorphic, and
// u2(+theta) < 0 when it is monomorphic.
struct SourceSinkU {
    UProfile u1;
    UProfile u2_upper;             // pointwise upper bound for u2
    double coef_minus = 0.0;       // parabola coefficient at -theta: sqrt(g1)/2
    double interval_minus_lo = 0.0; // where the bound pins u2 to the parabola
    double interval_minus_hi = 0.0;
    bool patch2_dimorphic = false;
    double coef_plus = 0.0;        // sqrt(g2)/2 when dimorphic
    double interval_plus_lo = 0.0;
    double interval_plus_hi = 0.0;
    bool u2_negative_at_plus = false; // monomorphic sink: u2(+theta) < 0
    double u2_bound_at_plus = 0.0;    // upper bound value at +theta
};

SourceSinkU source_sink_u(const std::vector<double>& grid,
                          const SourceSinkEss& ess, const ModelParams& p,
                          const UProfileOptions& opt = {});

} // namespace metapop
