#include "metapop/moments.hpp"

#include <cmath>

#include "metapop/errors.hpp"

namespace metapop {

double gaussian_central_moment(int k, double variance) {
    if (k < 0) throw PreconditionError("gaussian_central_moment: k >= 0 required");
    if (k % 2 == 1) return 0.0;
    double acc = 1.0;
    for (int j = k - 1; j > 1; j -= 2) acc *= j; // (k-1)!!
    return acc * std::pow(variance, k / 2);
}

MomentSummary asymptotic_moments(const Ess& ess, const UTaylor& ut,
                                 const CorrectorSet& cs, double eps) {
    if (ess.kind != EssKind::Monomorphic)
        throw PreconditionError("asymptotic_moments: monomorphic equilibrium required");
    if (!(eps > 0.0))
        throw PreconditionError("asymptotic_moments: eps must be positive");
    const double A = ut.A, B = ut.B, C = ut.C;
    MomentSummary m;
    m.eps = eps;
    for (int i = 0; i < 2; ++i) {
        const double Ni = i == 0 ? ess.N_star.N1 : ess.N_star.N2;
        const double Di = cs.D[i];
        const double rel = cs.F[i] + (cs.E[i] + 0.5 * Di * Di) / A +
                           3.0 * (C + B * Di) / (A * A) +
                           7.5 * B * B / (A * A * A);
        m.N[i] = Ni * (1.0 + eps * rel);
        m.mean[i] = ess.z_star + eps * (3.0 * B / (A * A) + Di / A);
        m.variance[i] = eps / A;
        m.skewness[i] = 6.0 * B * std::sqrt(eps) / std::pow(A, 1.5);
    }
    return m;
}

} // namespace metapop
