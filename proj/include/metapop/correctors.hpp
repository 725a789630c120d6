#pragma once

#include "metapop/ess.hpp"
#include "metapop/hj.hpp"
#include "metapop/model.hpp"

namespace metapop {

// First-order (in the mutation scale eps) correction data at a monomorphic
// equilibrium point z_star. With s = z - z_star, the log-density expansion
// u_eps,i = u + eps v_i + eps^2 w_i carries
//   v_i(z) = v_offset[i] + D[i] s + E[i] s^2 + O(s^3)
//   w_i(z) = F[i] + G_i s + O(s^2)        (only G_2 - G_1 is determined)
// and the population sizes satisfy N_eps,i = N_i* + eps K[i] + O(eps^2).
// lambda1..3 are the intermediate gaps (D2-D1, E2-E1 and their combination
// entering the K system).
struct CorrectorSet {
    double z_star = 0.0;
    double v_offset[2] = {0.0, 0.0};
    double D[2] = {0.0, 0.0};
    double E[2] = {0.0, 0.0};
    double F[2] = {0.0, 0.0};
    double K[2] = {0.0, 0.0};
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    double G_gap = 0.0; // G_2 - G_1
};

// eps-order log-density gap v_2(z) - v_1(z) =
// log((W(z) - R_1(z, N1*) + m1) / m2) at the monomorphic equilibrium sizes.
// Defined where the argument of the logarithm is positive (always true in
// exact arithmetic for two-way migration; cancellation can void it far from
// the support).
double log_density_ratio(double z, const Ess& ess, const ModelParams& p);

// Full first-order chain for a two-way monomorphic equilibrium.
CorrectorSet corrector_set(const Ess& ess, const UTaylor& ut,
                           const ModelParams& p);

// One-way counterpart for the monomorphic sink (patch 2 at -theta). Habitat
// 1 is closed form: v_1, w_1 constant and K_1 = -sqrt(g1)/kappa1.
CorrectorSet source_sink_correctors(const SourceSinkEss& ess,
                                    const ModelParams& p);

} // namespace metapop
