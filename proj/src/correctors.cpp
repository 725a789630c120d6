#include "metapop/correctors.hpp"

#include <cmath>

#include "metapop/errors.hpp"
#include "metapop/series.hpp"

namespace metapop {

namespace {

void solve2x2(const double M[2][2], const double rhs[2], double out[2]) {
    const double det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
    if (std::abs(det) < 1e-300)
        throw NumericalError("corrector chain: singular 2x2 size system");
    out[0] = (rhs[0] * M[1][1] - M[0][1] * rhs[1]) / det;
    out[1] = (M[0][0] * rhs[1] - rhs[0] * M[1][0]) / det;
}

} // namespace

double log_density_ratio(double z, const Ess& ess, const ModelParams& p) {
    if (ess.kind != EssKind::Monomorphic)
        throw PreconditionError("log_density_ratio: monomorphic equilibrium required");
    const double W = effective_fitness(z, ess.N_star, p);
    const double R1 = growth_rate(z, ess.N_star.N1, 1, p);
    const double arg = (W - R1 + p.m1) / p.m2;
    if (!(arg > 0.0))
        throw PreconditionError(
            "log_density_ratio: nonpositive logarithm argument (cancellation "
            "far from the support)");
    return std::log(arg);
}

CorrectorSet corrector_set(const Ess& ess, const UTaylor& ut,
                           const ModelParams& p) {
    if (ess.kind != EssKind::Monomorphic)
        throw PreconditionError("corrector_set: monomorphic equilibrium required");
    if (!(p.m1 > 0.0) || !(p.m2 > 0.0))
        throw PreconditionError("corrector_set: two-way migration required");
    if (!(ut.A > 0.0))
        throw PreconditionError("corrector_set: Taylor data requires A > 0");

    const double A = ut.A, B = ut.B, C = ut.C;
    const double zs = ess.z_star;
    const double N1 = ess.N_star.N1, N2 = ess.N_star.N2;
    const double w1 = p.m2 * N2 / N1; // migration weights in the matched system
    const double w2 = p.m1 * N1 / N2;

    CorrectorSet cs;
    cs.z_star = zs;
    cs.lambda1 = 2.0 * p.g1 * N1 * (zs + p.theta) / (p.m2 * N2);
    cs.lambda2 =
        (N1 / (p.m2 * N2)) * (p.g1 - A * A) - 0.5 * cs.lambda1 * cs.lambda1;
    cs.lambda3 = 3.0 * B * cs.lambda1 / (A * A) + cs.lambda2 / A;

    // sizes K_i are affine in sigma = D1 + D2 through
    // h(sigma) = lambda3 + lambda1 sigma / (2A)
    const double M[2][2] = {{-p.kappa1 - w1 / N1, p.m2 / N1},
                            {p.m1 / N2, -p.kappa2 - w2 / N2}};
    const double rhs0[2] = {A + w1 * cs.lambda3, A - w2 * cs.lambda3};
    const double hs = cs.lambda1 / (2.0 * A); // dh/dsigma
    const double rhs1[2] = {w1 * hs, -w2 * hs};
    double K0[2], K1[2];
    solve2x2(M, rhs0, K0);
    solve2x2(M, rhs1, K1);

    const double wsum = w1 + w2;
    const double dF0 = (p.kappa1 * K0[0] - p.kappa2 * K0[1]) / wsum;
    const double dF1 = (p.kappa1 * K1[0] - p.kappa2 * K1[1]) / wsum;
    const double dG0 =
        (-2.0 * A * cs.lambda1 - (w1 - w2) * cs.lambda1 * dF0) / wsum;
    const double dG1 = -(w1 - w2) * cs.lambda1 * dF1 / wsum;

    // order-s matching of the first habitat line:
    //   -6B = -A (sigma - lambda1) + w1 (lambda1 dF(sigma) + dG(sigma))
    const double coef = -A + w1 * (cs.lambda1 * dF1 + dG1);
    const double rhs = -6.0 * B - A * cs.lambda1 - w1 * (cs.lambda1 * dF0 + dG0);
    if (std::abs(coef) < 1e-12)
        throw NumericalError(
            "corrector_set: singular chain, the scalar equation for D1 + D2 "
            "is degenerate");
    const double sigma = rhs / coef;

    cs.D[0] = 0.5 * (sigma - cs.lambda1);
    cs.D[1] = cs.D[0] + cs.lambda1;
    cs.K[0] = K0[0] + sigma * K1[0];
    cs.K[1] = K0[1] + sigma * K1[1];
    const double cK = p.kappa1 * cs.K[0] - p.kappa2 * cs.K[1];
    cs.G_gap = dG0 + sigma * dG1;

    // order-s^2 matching after eliminating w_2 - w_1 determines E_1; the gap
    // E_2 - E_1 = lambda2 is exact by construction
    const double rho = N2 / N1;
    Series dv;
    dv.c = {std::log(rho), cs.lambda1, cs.lambda2, 0.0, 0.0};
    const Series e_p = exp(dv);
    const Series e_m = exp(-dv);
    const Series den = p.m2 * e_p + p.m1 * e_m;
    Series bracket;
    bracket.c = {cK, -2.0 * A * cs.lambda1,
                 -4.0 * A * cs.lambda2 + 6.0 * B * cs.lambda1, 0.0, 0.0};
    const Series T1 = (p.m2 * e_p / den) * bracket;
    cs.E[0] = (12.0 * C + 6.0 * B * cs.D[0] + T1[2]) / (4.0 * A);
    cs.E[1] = cs.E[0] + cs.lambda2;

    for (int i = 0; i < 2; ++i) {
        const double Ni = i == 0 ? N1 : N2;
        cs.F[i] = cs.K[i] / Ni - 7.5 * B * B / (A * A * A) -
                  3.0 * (C + B * cs.D[i]) / (A * A) -
                  (cs.E[i] + 0.5 * cs.D[i] * cs.D[i]) / A;
        cs.v_offset[i] = std::log(Ni * std::sqrt(A));
    }
    return cs;
}

CorrectorSet source_sink_correctors(const SourceSinkEss& ess,
                                    const ModelParams& p) {
    const RegimeReport rep = check_assumptions(p);
    if (rep.regime != Regime::SourceSink)
        throw PreconditionError(
            "source_sink_correctors: one-way migration regime required");
    if (ess.patch2.kind != EssKind::Monomorphic ||
        std::abs(ess.condition_gap) <= kBoundaryTol)
        throw PreconditionError(
            "source_sink_correctors: available only for the strictly "
            "monomorphic sink (m1(r1-m1)/kappa1 > 4 g2 theta^2 r2/kappa2)");

    const double th = p.theta;
    const double sg1 = std::sqrt(p.g1);
    const double N1 = ess.patch1.N_star.N1;
    const double N2 = ess.patch2.N_star.N2;

    CorrectorSet cs;
    cs.z_star = -th;

    // habitat 1 is autonomous and Gaussian: constants throughout
    cs.v_offset[0] = std::log(std::pow(p.g1, 0.25) * N1);
    cs.D[0] = 0.0;
    cs.E[0] = 0.0;
    cs.F[0] = -sg1 / (p.kappa1 * N1);
    cs.K[0] = -sg1 / p.kappa1;

    // habitat 2 log-density offset: v_2(z) = log(m1 g1^(1/4) N1 / phi(z))
    // with phi(z) = -g1 (z+theta)^2 + g2 (z-theta)^2 - r2 + kappa2 N2
    const double phi0 = 4.0 * p.g2 * th * th - p.r2 + p.kappa2 * N2;
    const double dphi = -4.0 * p.g2 * th;        // phi'(-theta)
    const double ddphi = 2.0 * (p.g2 - p.g1);    // phi''(-theta)
    cs.v_offset[1] = std::log(std::pow(p.g1, 0.25) * N2);
    cs.D[1] = -dphi / phi0;
    cs.E[1] = 0.5 * (-ddphi / phi0 + (dphi / phi0) * (dphi / phi0));

    // (K2, F2) from the coupled linear pair
    //   K2 = N2 ((E2 + D2^2/2)/sqrt(g1) + F2)
    //   F2 = w1 - (N2/(m1 N1)) (sqrt(g1) + kappa2 K2)
    const double q = N2 * (cs.E[1] + 0.5 * cs.D[1] * cs.D[1]) / sg1;
    const double a = cs.F[0] - N2 * sg1 / (p.m1 * N1);
    const double b = N2 * p.kappa2 / (p.m1 * N1);
    // K2 = q + N2 F2,  F2 = a - b K2
    cs.K[1] = (q + N2 * a) / (1.0 + N2 * b);
    cs.F[1] = a - b * cs.K[1];

    cs.lambda1 = cs.D[1] - cs.D[0];
    cs.lambda2 = cs.E[1] - cs.E[0];
    cs.lambda3 = 0.0;
    cs.G_gap = 0.0; // not determined in the one-way chain
    return cs;
}

} // namespace metapop
