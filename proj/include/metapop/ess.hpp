#pragma once

#include <vector>

#include "metapop/model.hpp"

namespace metapop {

// Absolute tolerance used to detect equality in the second/third dimorphism
// conditions (exact equality is measure-zero in parameter space).
inline constexpr double kBoundaryTol = 1e-10;

enum class EssKind { Monomorphic, Dimorphic };

// Signed gaps of the three dimorphism conditions; the equilibrium is
// dimorphic iff all three are strictly positive.
//   c1 = 1 - m1 m2 / (4 g1 g2 theta^4)
//   c2 = m2 N2_D + (R1(-z_D; N1_D) - m1) N1_D
//   c3 = m1 N1_D + (R2(+z_D; N2_D) - m2) N2_D
// eq7/eq8 are the sign-mirrored equivalent forms of c2/c3 (diagnostics:
// sign(eq7) = -sign(c2), sign(eq8) = -sign(c3)).
struct DimorphismConditions {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    bool applicable23 = false; // c2, c3 meaningful only when c1 >= 0
    double eq7 = 0.0, eq8 = 0.0;

    bool dimorphic() const {
        return c1 > 0.0 && applicable23 && c2 > kBoundaryTol && c3 > kBoundaryTol;
    }
};

// Classified evolutionary stable strategy with its demographic equilibrium.
// Monomorphic: support {z_star}. Dimorphic: support {z_I, z_II} with
// z_II = -z_I = z_D and Dirac weights nu[k][i] (k: support point, i: habitat,
// zero-based). boundary_case marks equality (within kBoundaryTol) in the
// second or third dimorphism condition, where the monomorphic point sits
// exactly at -z_D or +z_D.
struct Ess {
    EssKind kind = EssKind::Monomorphic;
    double z_star = 0.0;
    double z_I = 0.0, z_II = 0.0;
    double nu[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    PopState N_star;
    MuState mu_star;
    bool boundary_case = false;
    DimorphismConditions cond;

    std::vector<double> support() const {
        if (kind == EssKind::Monomorphic) return {z_star};
        return {z_I, z_II};
    }
};

struct DimorphicCandidate {
    double z_D = 0.0;      // positive support point
    PopState N;            // candidate population sizes
    double mu_star = 0.0;  // common size indicator m1 m2 / (4 theta^2 g1 g2)
};

struct ResidentEquilibrium {
    double z_resident = 0.0;
    MuState mu_eq;
    PopState N_eq;
};

// One-way (m2 = 0) equilibria. patch1 is always monomorphic at -theta;
// patch2 is dimorphic {-theta, +theta} or monomorphic {-theta} depending on
// whether the immigration load m1 N1 stays below 4 g2 theta^2 r2 / kappa2.
// Both members carry the metapopulation sizes (N1, N2) at the coupled
// demographic equilibrium.
struct SourceSinkEss {
    Ess patch1;
    Ess patch2;
    double condition_gap = 0.0; // 4 g2 theta^2 r2/kappa2 - m1(r1-m1)/kappa1
};

DimorphicCandidate dimorphic_candidate(const ModelParams& p);
DimorphismConditions dimorphism_conditions(const ModelParams& p);

// Dirac weights of the dimorphic equilibrium; requires all three conditions
// strictly positive.
void dimorphic_weights(const ModelParams& p, double nu[2][2]);

// Global minimum of the quartic f(.; mu1, mu2); critical points come from
// the closed-form depressed cubic, no iteration. z_min receives the argmin
// (smallest one on ties).
double quartic_min(double mu1, double mu2, const ModelParams& p, double* z_min);

struct PeakFit {
    double mu1 = 0.0;
    double z_bar = 0.0;
};

// Given mu2 > 0, finds mu1 (by bisection; the minimum of f is strictly
// increasing in mu1) such that min_z f(z; mu1, mu2) = m1 m2 / (g1 g2), i.e.
// the fittest trait z_bar is exactly neutral. Undefined at the splitting
// value mu2 = m1 m2/(4 theta^2 g1 g2) when that value lies below theta^2
// (two global minima).
PeakFit calibrate_mu1(double mu2, const ModelParams& p);

// Habitat-2 size indicator implied by demographic balance when a
// monomorphic population sits at trait z with habitat-1 indicator mu1.
// Increasing in both arguments.
double closure_mu2(double mu1, double z, const ModelParams& p);

// Unique monomorphic equilibrium via the fixed point of
// closure_mu2(calibrate_mu1(.)) on the branch selected by the signs of the
// dimorphism conditions. Requires that the conditions are NOT all strict.
Ess monomorphic_ess(const ModelParams& p);

// Unique ESS of the two-way model: dispatches between the dimorphic closed
// form and the monomorphic fixed point.
Ess solve_ess(const ModelParams& p);

// Demographic equilibrium of a monomorphic resident population held at an
// arbitrary trait (the resident need not be evolutionarily stable).
ResidentEquilibrium resident_equilibrium(double z_resident, const ModelParams& p);

// Fitness of a rare mutant trait against a resident at its demographic
// equilibrium; positive means the mutant invades.
double invasion_fitness(double z_mutant, const ResidentEquilibrium& res,
                        const ModelParams& p);

SourceSinkEss source_sink_ess(const ModelParams& p);

} // namespace metapop
