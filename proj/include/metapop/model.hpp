#pragma once

#include <string>

namespace metapop {

// The nine constants of the two-habitat selection-mutation-migration model.
// Units are documented only: r [1/time], g [1/(time*trait^2)],
// kappa [1/(time*density)], m [1/time], theta [trait]. The habitat optima
// sit at -theta (habitat 1) and +theta (habitat 2).
struct ModelParams {
    double r1 = 1.0, r2 = 1.0;         // maximum intrinsic growth rates
    double g1 = 1.0, g2 = 1.0;         // selection strengths
    double kappa1 = 1.0, kappa2 = 1.0; // competition intensities
    double m1 = 0.0, m2 = 0.0;         // migration rates (m1: habitat 1 -> 2)
    double theta = 1.0;                // half-distance between habitat optima

    double optimum(int habitat) const { return habitat == 1 ? -theta : theta; }
};

// Total population sizes per habitat.
struct PopState {
    double N1 = 0.0, N2 = 0.0;
};

// Affine population-size indicators mu_i = (kappa_i N_i + m_i - r_i) / g_i.
// They may be negative away from equilibrium; at an evolutionary equilibrium
// in the two-way regime both are positive.
struct MuState {
    double mu1 = 0.0, mu2 = 0.0;
};

enum class Regime { TwoWay, SourceSink, Invalid };

struct RegimeReport {
    Regime regime = Regime::Invalid;
    std::string violated; // violated inequality when Invalid, empty otherwise
};

const char* regime_name(Regime r);

// Per-habitat growth rate r_i - g_i (z - optimum_i)^2 - kappa_i N.
double growth_rate(double z, double N, int habitat, const ModelParams& p);

// Effective fitness of a rare trait z in the metapopulation at population
// sizes (N1, N2): the largest eigenvalue of the growth-plus-migration matrix
//   [ R1 - m1    m2      ]
//   [ m1         R2 - m2 ].
// For one-way migration (m1*m2 == 0) the matrix is triangular and the exact
// max form is used instead of the square-root formula.
double effective_fitness(double z, const PopState& N, const ModelParams& p);

// Same fitness expressed through the size indicators mu_i.
double effective_fitness_mu(double z, const MuState& mu, const ModelParams& p);

MuState mu_of_N(const PopState& N, const ModelParams& p);
PopState N_of_mu(const MuState& mu, const ModelParams& p);

// f(z; mu1, mu2) = (mu1 + (z+theta)^2) (mu2 + (z-theta)^2). The fitness is
// nonpositive everywhere iff this quartic stays above m1 m2 / (g1 g2) and the
// g-weighted sum of the two factors is nonnegative.
double quartic_f(double z, const MuState& mu, const ModelParams& p);

// Classifies the parameter set into the supported migration regimes and
// names the violated inequality otherwise.
RegimeReport check_assumptions(const ModelParams& p);

} // namespace metapop
