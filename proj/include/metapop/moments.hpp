#pragma once

#include "metapop/correctors.hpp"
#include "metapop/ess.hpp"
#include "metapop/hj.hpp"

namespace metapop {

// Per-habitat summary statistics of the trait distribution at mutation
// scale eps (index 0: habitat 1).
struct MomentSummary {
    double eps = 0.0;
    double N[2] = {0.0, 0.0};
    double mean[2] = {0.0, 0.0};
    double variance[2] = {0.0, 0.0};
    double skewness[2] = {0.0, 0.0};
};

// k-th central moment of a Gaussian with the given variance:
// 0 for odd k, variance^(k/2) (k-1)!! for even k.
double gaussian_central_moment(int k, double variance);

// First-order (in eps) approximations derived from the Taylor data of u and
// the corrector chain at a monomorphic equilibrium:
//   N_i    = N_i* (1 + eps (F_i + (E_i + D_i^2/2)/A + 3(C + B D_i)/A^2
//                            + 7.5 B^2/A^3))
//   mean_i = z* + eps (3B/A^2 + D_i/A)
//   var_i  = eps / A
//   skew_i = 6 B sqrt(eps) / A^(3/2)
MomentSummary asymptotic_moments(const Ess& ess, const UTaylor& ut,
                                 const CorrectorSet& cs, double eps);

} // namespace metapop
