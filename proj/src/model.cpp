#include "metapop/model.hpp"

#include <algorithm>
#include <cmath>

#include "metapop/errors.hpp"

namespace metapop {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::TwoWay: return "two_way";
        case Regime::SourceSink: return "source_sink";
        default: return "invalid";
    }
}

double growth_rate(double z, double N, int habitat, const ModelParams& p) {
    if (habitat != 1 && habitat != 2)
        throw PreconditionError("growth_rate: habitat must be 1 or 2");
    const double d = z - p.optimum(habitat);
    if (habitat == 1) return p.r1 - p.g1 * d * d - p.kappa1 * N;
    return p.r2 - p.g2 * d * d - p.kappa2 * N;
}

double effective_fitness(double z, const PopState& N, const ModelParams& p) {
    const double a = growth_rate(z, N.N1, 1, p) - p.m1;
    const double b = growth_rate(z, N.N2, 2, p) - p.m2;
    if (p.m1 * p.m2 == 0.0) return std::max(a, b);
    return 0.5 * ((a + b) + std::hypot(a - b, 2.0 * std::sqrt(p.m1 * p.m2)));
}

double effective_fitness_mu(double z, const MuState& mu, const ModelParams& p) {
    const double zp = z + p.theta;
    const double zm = z - p.theta;
    const double a = -p.g1 * (mu.mu1 + zp * zp);
    const double b = -p.g2 * (mu.mu2 + zm * zm);
    if (p.m1 * p.m2 == 0.0) return std::max(a, b);
    return 0.5 * ((a + b) + std::hypot(a - b, 2.0 * std::sqrt(p.m1 * p.m2)));
}

MuState mu_of_N(const PopState& N, const ModelParams& p) {
    return {(p.kappa1 * N.N1 + p.m1 - p.r1) / p.g1,
            (p.kappa2 * N.N2 + p.m2 - p.r2) / p.g2};
}

PopState N_of_mu(const MuState& mu, const ModelParams& p) {
    return {(p.g1 * mu.mu1 + p.r1 - p.m1) / p.kappa1,
            (p.g2 * mu.mu2 + p.r2 - p.m2) / p.kappa2};
}

double quartic_f(double z, const MuState& mu, const ModelParams& p) {
    const double zp = z + p.theta;
    const double zm = z - p.theta;
    return (mu.mu1 + zp * zp) * (mu.mu2 + zm * zm);
}

RegimeReport check_assumptions(const ModelParams& p) {
    if (!(p.g1 > 0.0) || !(p.g2 > 0.0))
        return {Regime::Invalid, "selection strengths must satisfy g1 > 0 and g2 > 0"};
    if (!(p.kappa1 > 0.0) || !(p.kappa2 > 0.0))
        return {Regime::Invalid, "competition intensities must satisfy kappa1 > 0 and kappa2 > 0"};
    if (!(p.theta > 0.0))
        return {Regime::Invalid, "habitat optima must be distinct: theta > 0"};
    if (p.m1 < 0.0 || p.m2 < 0.0)
        return {Regime::Invalid, "migration rates must satisfy m1 >= 0 and m2 >= 0"};
    if (!(std::max(p.r1 - p.m1, p.r2 - p.m2) > 0.0))
        return {Regime::Invalid, "viability requires max(r1 - m1, r2 - m2) > 0"};
    if (p.m1 > 0.0 && p.m2 > 0.0) return {Regime::TwoWay, ""};
    if (p.m1 > 0.0 && p.m2 == 0.0) {
        if (p.r1 - p.m1 > 0.0) return {Regime::SourceSink, ""};
        return {Regime::Invalid, "one-way migration requires r1 - m1 > 0"};
    }
    return {Regime::Invalid,
            "migration must be two-way (m1 > 0 and m2 > 0) or one-way out of "
            "habitat 1 (m1 > 0, m2 = 0)"};
}

} // namespace metapop
