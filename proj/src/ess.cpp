#include "metapop/ess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "metapop/errors.hpp"
#include "metapop/roots.hpp"

namespace metapop {

namespace {

double mu_split_value(const ModelParams& p) {
    return p.m1 * p.m2 / (4.0 * p.theta * p.theta * p.g1 * p.g2);
}

void require_two_way(const ModelParams& p, const char* op) {
    const RegimeReport rep = check_assumptions(p);
    if (rep.regime == Regime::TwoWay) return;
    std::ostringstream os;
    os << op << ": two-way migration regime required";
    if (!rep.violated.empty()) os << " (" << rep.violated << ")";
    else os << " (m1 > 0 and m2 > 0)";
    throw PreconditionError(os.str());
}

} // namespace

DimorphicCandidate dimorphic_candidate(const ModelParams& p) {
    require_two_way(p, "dimorphic_candidate");
    const double mu = mu_split_value(p);
    const double th2 = p.theta * p.theta;
    if (mu > th2)
        throw PreconditionError(
            "dimorphic_candidate: not in dimorphic regime, "
            "m1*m2/(4*g1*g2*theta^4) > 1");
    DimorphicCandidate c;
    c.mu_star = mu;
    c.z_D = std::sqrt(std::max(th2 - mu, 0.0));
    c.N = N_of_mu({mu, mu}, p);
    return c;
}

DimorphismConditions dimorphism_conditions(const ModelParams& p) {
    require_two_way(p, "dimorphism_conditions");
    DimorphismConditions out;
    const double th2 = p.theta * p.theta;
    const double mu = mu_split_value(p);
    out.c1 = 1.0 - mu / th2;
    if (out.c1 < 0.0) return out; // c2, c3 not applicable
    const DimorphicCandidate c = dimorphic_candidate(p);
    const double a = growth_rate(-c.z_D, c.N.N1, 1, p) - p.m1;
    const double b = growth_rate(c.z_D, c.N.N2, 2, p) - p.m2;
    out.applicable23 = true;
    out.c2 = p.m2 * c.N.N2 + a * c.N.N1;
    out.c3 = p.m1 * c.N.N1 + b * c.N.N2;
    out.eq7 = p.m1 * c.N.N1 + (growth_rate(-c.z_D, c.N.N2, 2, p) - p.m2) * c.N.N2;
    out.eq8 = p.m2 * c.N.N2 + (growth_rate(c.z_D, c.N.N1, 1, p) - p.m1) * c.N.N1;
    return out;
}

void dimorphic_weights(const ModelParams& p, double nu[2][2]) {
    const DimorphismConditions cond = dimorphism_conditions(p);
    if (!cond.dimorphic())
        throw PreconditionError(
            "dimorphic_weights: the three dimorphism conditions must all be "
            "strictly positive");
    const DimorphicCandidate c = dimorphic_candidate(p);
    const double a = growth_rate(-c.z_D, c.N.N1, 1, p) - p.m1;
    const double b = growth_rate(c.z_D, c.N.N2, 2, p) - p.m2;
    const double den = p.m1 * p.m2 - a * b;
    // den > 0 whenever z_D > 0; the factors a, b are both negative
    const double sI = cond.c3 / den;
    const double sII = cond.c2 / den;
    nu[0][0] = sI * p.m2;
    nu[0][1] = sI * (-a);
    nu[1][0] = sII * (-b);
    nu[1][1] = sII * p.m1;
}

double quartic_min(double mu1, double mu2, const ModelParams& p, double* z_min) {
    const double th = p.theta;
    // f'(z)/4 = z^3 + pc z + qc  (no quadratic term)
    const double pc = 0.5 * (mu1 + mu2 - 2.0 * th * th);
    const double qc = 0.5 * th * (mu2 - mu1);
    double roots[3];
    const int n = solve_depressed_cubic(pc, qc, roots);
    double best = std::numeric_limits<double>::infinity();
    double zb = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = quartic_f(roots[i], {mu1, mu2}, p);
        if (v < best) {
            best = v;
            zb = roots[i];
        }
    }
    if (z_min) *z_min = zb;
    return best;
}

PeakFit calibrate_mu1(double mu2, const ModelParams& p) {
    require_two_way(p, "calibrate_mu1");
    if (!(mu2 > 0.0))
        throw PreconditionError("calibrate_mu1: mu2 must be positive");
    const double th2 = p.theta * p.theta;
    const double split = mu_split_value(p);
    if (split < th2 && std::abs(mu2 - split) <= 1e-15 * std::max(1.0, split))
        throw PreconditionError(
            "calibrate_mu1: undefined at mu2 = m1*m2/(4*theta^2*g1*g2), the "
            "fitness minimum is attained at two traits there");
    const double target = p.m1 * p.m2 / (p.g1 * p.g2);
    auto gap = [&](double mu1) { return quartic_min(mu1, mu2, p, nullptr) - target; };
    // min_z f(z; 0, mu2) = 0 < target, and min_z f >= mu1*mu2 + 2*theta^2*min(mu1,mu2)
    // so mu1 = target/mu2 over-shoots; the gap is strictly increasing in mu1.
    const double hi = target / mu2;
    const double mu1 = bisect(gap, 0.0, hi);
    PeakFit fit;
    fit.mu1 = mu1;
    quartic_min(mu1, mu2, p, &fit.z_bar);
    return fit;
}

double closure_mu2(double mu1, double z, const ModelParams& p) {
    const double zp = z + p.theta;
    const double N1 = (p.g1 * mu1 + p.r1 - p.m1) / p.kappa1;
    return ((p.kappa2 * p.g1 / p.m2) * (zp * zp + mu1) * N1 + p.m2 - p.r2) / p.g2;
}

namespace {

double fixed_point_gap(double mu2, const ModelParams& p) {
    const PeakFit fit = calibrate_mu1(mu2, p);
    return closure_mu2(fit.mu1, fit.z_bar, p) - mu2;
}

Ess boundary_monomorphic(const ModelParams& p, bool at_minus,
                         const DimorphismConditions& cond) {
    const DimorphicCandidate c = dimorphic_candidate(p);
    Ess ess;
    ess.kind = EssKind::Monomorphic;
    ess.z_star = at_minus ? -c.z_D : c.z_D;
    ess.mu_star = {c.mu_star, c.mu_star};
    ess.N_star = c.N;
    ess.boundary_case = true;
    ess.cond = cond;
    return ess;
}

// Expands lo downward toward `edge` until the gap function turns positive.
double expand_lo_toward(const std::function<double(double)>& gap, double edge,
                        double start, const char* op) {
    double off = start - edge;
    for (int i = 0; i < 200; ++i) {
        const double lo = edge + off;
        if (lo > edge && gap(lo) > 0.0) return lo;
        off *= 0.25;
    }
    std::ostringstream os;
    os << op << ": no sign change while approaching the lower bracket edge";
    throw NumericalError(os.str());
}

double expand_hi(const std::function<double(double)>& gap, double start,
                 const char* op) {
    double hi = start;
    for (int i = 0; i < 200; ++i) {
        if (gap(hi) < 0.0) return hi;
        hi *= 2.0;
    }
    std::ostringstream os;
    os << op << ": no sign change while expanding the upper bracket";
    throw NumericalError(os.str());
}

} // namespace

Ess monomorphic_ess(const ModelParams& p) {
    require_two_way(p, "monomorphic_ess");
    const DimorphismConditions cond = dimorphism_conditions(p);
    if (cond.dimorphic())
        throw PreconditionError(
            "monomorphic_ess: all three dimorphism conditions hold strictly, "
            "the equilibrium is dimorphic");

    const bool split = cond.c1 > 0.0;
    auto gap = [&](double mu2) { return fixed_point_gap(mu2, p); };

    double lo = 0.0, hi = 0.0;
    double lo_interval = -p.theta, hi_interval = p.theta; // expected z range
    if (split) {
        const double mu_star = mu_split_value(p);
        if (std::abs(cond.c2) <= kBoundaryTol)
            return boundary_monomorphic(p, /*at_minus=*/true, cond);
        if (std::abs(cond.c3) <= kBoundaryTol)
            return boundary_monomorphic(p, /*at_minus=*/false, cond);
        const double z_D = std::sqrt(p.theta * p.theta - mu_star);
        // keep the bracket clear of the undefined splitting point; fixed
        // points closer than this are intercepted as boundary cases above
        const double margin = 1e-13 * std::max(1.0, mu_star);
        if (cond.c2 > 0.0 && cond.c3 < 0.0) {
            // fixed point in (0, mu_star), trait in (z_D, theta)
            lo = expand_lo_toward(gap, 0.0, 0.5 * mu_star, "monomorphic_ess");
            hi = mu_star - margin;
            if (gap(hi) >= 0.0)
                throw NumericalError(
                    "monomorphic_ess: bracket lost below the splitting "
                    "indicator");
            lo_interval = z_D;
        } else if (cond.c3 > 0.0 && cond.c2 < 0.0) {
            // fixed point in (mu_star, inf), trait in (-theta, -z_D)
            lo = mu_star + margin;
            if (gap(lo) <= 0.0)
                throw NumericalError(
                    "monomorphic_ess: bracket lost above the splitting "
                    "indicator");
            hi = expand_hi(gap, std::max(1.0, 4.0 * mu_star), "monomorphic_ess");
            hi_interval = -z_D;
        } else {
            // c2 <= 0 and c3 <= 0 is impossible (the mirrored forms eq7/eq8
            // force at least one of them positive)
            throw NumericalError(
                "monomorphic_ess: inconsistent dimorphism condition signs");
        }
    } else {
        lo = expand_lo_toward(gap, 0.0, 1.0, "monomorphic_ess");
        hi = expand_hi(gap, std::max(1.0, 2.0 * lo), "monomorphic_ess");
    }

    const double mu2 = bisect(gap, lo, hi);
    const PeakFit fit = calibrate_mu1(mu2, p);
    Ess ess;
    ess.kind = EssKind::Monomorphic;
    ess.z_star = fit.z_bar;
    ess.mu_star = {fit.mu1, mu2};
    ess.N_star = N_of_mu(ess.mu_star, p);
    ess.cond = cond;
    if (!(ess.N_star.N1 > 0.0) || !(ess.N_star.N2 > 0.0))
        throw NumericalError(
            "monomorphic_ess: fixed point yields a nonpositive population "
            "size");
    if (split &&
        (ess.z_star < lo_interval - 1e-6 || ess.z_star > hi_interval + 1e-6))
        throw NumericalError(
            "monomorphic_ess: fixed point escaped its trait interval");
    return ess;
}

Ess solve_ess(const ModelParams& p) {
    require_two_way(p, "solve_ess");
    const DimorphismConditions cond = dimorphism_conditions(p);
    if (!cond.dimorphic()) return monomorphic_ess(p);
    const DimorphicCandidate c = dimorphic_candidate(p);
    Ess ess;
    ess.kind = EssKind::Dimorphic;
    ess.z_I = -c.z_D;
    ess.z_II = c.z_D;
    ess.z_star = 0.0;
    dimorphic_weights(p, ess.nu);
    ess.N_star = c.N;
    ess.mu_star = {c.mu_star, c.mu_star};
    ess.cond = cond;
    return ess;
}

ResidentEquilibrium resident_equilibrium(double z_resident, const ModelParams& p) {
    require_two_way(p, "resident_equilibrium");
    const double th = p.theta;
    const double zp = z_resident + th;
    const double zm = z_resident - th;
    const double target = p.m1 * p.m2 / (p.g1 * p.g2);

    // det = 0 at the resident trait pins mu1 as a function of mu2
    auto mu1_of = [&](double mu2) { return target / (mu2 + zm * zm) - zp * zp; };
    auto gap = [&](double mu2) {
        return closure_mu2(mu1_of(mu2), z_resident, p) - mu2;
    };

    const double edge = -zm * zm; // domain edge, where mu1_of blows up
    const double lo =
        expand_lo_toward(gap, edge, edge + std::max(1.0, std::abs(edge)),
                         "resident_equilibrium");

    // valid equilibria need mu1 >= (m1-r1)/g1 (N1 >= 0) and
    // mu1 > -(z+theta)^2 (positive kernel vector); K is decreasing, so these
    // cap mu2 from above
    const double mu1_floor = std::max((p.m1 - p.r1) / p.g1, -zp * zp);
    double hi;
    if (mu1_floor + zp * zp > 0.0) {
        const double mu2_cap = target / (mu1_floor + zp * zp) - zm * zm;
        hi = mu2_cap - 1e-12 * std::max(1.0, std::abs(mu2_cap));
        if (hi <= lo || gap(hi) >= 0.0)
            throw NumericalError(
                "resident_equilibrium: no demographic equilibrium, fixed "
                "point leaves the admissible range");
    } else {
        hi = expand_hi(gap, std::max(1.0, 2.0 * std::abs(lo)),
                       "resident_equilibrium");
    }

    const double mu2 = bisect(gap, lo, hi);
    ResidentEquilibrium res;
    res.z_resident = z_resident;
    res.mu_eq = {mu1_of(mu2), mu2};
    res.N_eq = N_of_mu(res.mu_eq, p);
    if (res.N_eq.N1 < -1e-9 || res.N_eq.N2 < -1e-9 ||
        !(res.mu_eq.mu1 + zp * zp > 0.0))
        throw NumericalError(
            "resident_equilibrium: equilibrium violates positivity");
    res.N_eq.N1 = std::max(res.N_eq.N1, 0.0);
    res.N_eq.N2 = std::max(res.N_eq.N2, 0.0);
    return res;
}

double invasion_fitness(double z_mutant, const ResidentEquilibrium& res,
                        const ModelParams& p) {
    return effective_fitness_mu(z_mutant, res.mu_eq, p);
}

SourceSinkEss source_sink_ess(const ModelParams& p) {
    const RegimeReport rep = check_assumptions(p);
    if (rep.regime != Regime::SourceSink) {
        std::ostringstream os;
        os << "source_sink_ess: one-way migration regime required (m1 > 0, "
              "m2 = 0, r1 - m1 > 0)";
        if (!rep.violated.empty()) os << ": " << rep.violated;
        throw PreconditionError(os.str());
    }
    const double th = p.theta;
    const double N1 = (p.r1 - p.m1) / p.kappa1;
    const double load = p.m1 * N1;                         // immigration load
    const double cap = 4.0 * p.g2 * th * th * p.r2 / p.kappa2;
    const double gap = cap - load;

    SourceSinkEss out;
    out.condition_gap = gap;

    Ess& p1 = out.patch1;
    p1.kind = EssKind::Monomorphic;
    p1.z_star = -th;

    Ess& p2 = out.patch2;
    p2.boundary_case = std::abs(gap) <= kBoundaryTol;
    double N2;
    if (gap > 0.0) {
        // dimorphic sink: {-theta, +theta}
        const double alpha = load / (4.0 * p.g2 * th * th);
        N2 = p.r2 / p.kappa2;
        p2.kind = EssKind::Dimorphic;
        p2.z_I = -th;
        p2.z_II = th;
        p2.nu[0][0] = N1;
        p2.nu[1][0] = 0.0;
        p2.nu[0][1] = alpha;
        p2.nu[1][1] = N2 - alpha;
    } else {
        // monomorphic sink at -theta; N2 solves
        // kappa2 N^2 - (r2 - 4 g2 theta^2) N - m1 N1 = 0
        const double b = p.r2 - 4.0 * p.g2 * th * th;
        N2 = (b + std::sqrt(b * b + 4.0 * p.kappa2 * load)) / (2.0 * p.kappa2);
        p2.kind = EssKind::Monomorphic;
        p2.z_star = -th;
    }
    const PopState N{N1, N2};
    p1.N_star = N;
    p2.N_star = N;
    const MuState mu = mu_of_N(N, p);
    p1.mu_star = mu;
    p2.mu_star = mu;
    return out;
}

} // namespace metapop
