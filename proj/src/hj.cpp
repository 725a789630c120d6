#include "metapop/hj.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "metapop/errors.hpp"
#include "metapop/series.hpp"

namespace metapop {

namespace {

using Fn = std::function<double(double)>;

double simpson(const Fn& f, double a, double fa, double b, double fb,
               double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adsimp(const Fn& f, double a, double fa, double b, double fb, double fm,
              double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, flm);
    const double right = simpson(f, m, fm, b, fb, frm);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol)
        return left + right + diff / 15.0;
    return adsimp(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           adsimp(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const Fn& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson(f, a, fa, b, fb, fm);
    return adsimp(f, a, fa, b, fb, fm, whole, tol, 40);
}

// -|integral of g from anchor to each grid point|, g >= 0, accumulated
// outward cell by cell so the quadrature error stays local.
std::vector<double> branch_profile(const std::vector<double>& z, double anchor,
                                   const Fn& g, double tol) {
    const int n = static_cast<int>(z.size());
    std::vector<double> u(n, 0.0);
    if (n == 0) return u;
    if (anchor < z.front() || anchor > z.back())
        throw PreconditionError(
            "u profile: support point lies outside the grid");
    // first index with z[k] >= anchor
    const int k0 = static_cast<int>(
        std::lower_bound(z.begin(), z.end(), anchor) - z.begin());
    double acc = 0.0;
    for (int j = k0; j < n; ++j) {
        const double lo = (j == k0) ? anchor : z[j - 1];
        acc += integrate(g, lo, z[j], tol);
        u[j] = -acc;
    }
    acc = 0.0;
    for (int j = k0 - 1; j >= 0; --j) {
        const double hi = (j == k0 - 1) ? anchor : z[j + 1];
        acc += integrate(g, z[j], hi, tol);
        u[j] = -acc;
    }
    return u;
}

std::vector<double> merged_grid(const std::vector<double>& grid,
                                const std::vector<double>& extra) {
    std::vector<double> z = grid;
    z.insert(z.end(), extra.begin(), extra.end());
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end(),
                        [](double a, double b) {
                            return std::abs(a - b) <=
                                   1e-14 * (1.0 + std::abs(a));
                        }),
            z.end());
    return z;
}

UProfile build_profile(const std::vector<double>& grid,
                       const std::vector<double>& support, const Fn& W,
                       const UProfileOptions& opt, const char* op) {
    UProfile prof;
    prof.support = support;
    prof.z = opt.insert_support ? merged_grid(grid, support) : grid;
    for (double z : prof.z) {
        const double w = W(z);
        if (w > opt.fitness_tol) {
            std::ostringstream os;
            os << op << ": effective fitness is positive off the support (W("
               << z << ") = " << w << " > " << opt.fitness_tol << ")";
            throw PreconditionError(os.str());
        }
    }
    Fn g = [&W](double x) { return std::sqrt(std::max(-W(x), 0.0)); };
    prof.u.assign(prof.z.size(), 0.0);
    bool first = true;
    for (double anchor : support) {
        std::vector<double> b = branch_profile(prof.z, anchor, g, opt.quad_tol);
        if (first) {
            prof.u = std::move(b);
            first = false;
        } else {
            for (std::size_t j = 0; j < prof.u.size(); ++j)
                prof.u[j] = std::max(prof.u[j], b[j]);
        }
    }
    return prof;
}

} // namespace

std::vector<double> default_grid(const ModelParams& p, int n) {
    const double L = p.theta + 3.0;
    std::vector<double> z(n);
    for (int j = 0; j < n; ++j)
        z[j] = -L + 2.0 * L * static_cast<double>(j) / (n - 1);
    return z;
}

UProfile u_profile_monomorphic(const std::vector<double>& grid, const Ess& ess,
                               const ModelParams& p,
                               const UProfileOptions& opt) {
    if (ess.kind != EssKind::Monomorphic)
        throw PreconditionError("u_profile_monomorphic: monomorphic ESS required");
    Fn W = [&](double z) { return effective_fitness(z, ess.N_star, p); };
    return build_profile(grid, {ess.z_star}, W, opt, "u_profile_monomorphic");
}

UProfile u_profile_dimorphic(const std::vector<double>& grid, const Ess& ess,
                             const ModelParams& p, const UProfileOptions& opt) {
    if (ess.kind != EssKind::Dimorphic)
        throw PreconditionError("u_profile_dimorphic: dimorphic ESS required");
    Fn W = [&](double z) { return effective_fitness(z, ess.N_star, p); };
    return build_profile(grid, {ess.z_I, ess.z_II}, W, opt,
                         "u_profile_dimorphic");
}

UProfile u_profile(const std::vector<double>& grid, const Ess& ess,
                   const ModelParams& p, const UProfileOptions& opt) {
    return ess.kind == EssKind::Monomorphic
               ? u_profile_monomorphic(grid, ess, p, opt)
               : u_profile_dimorphic(grid, ess, p, opt);
}

UTaylor u_taylor(double z_star, const PopState& N_star, const ModelParams& p) {
    if (!(p.m1 > 0.0) || !(p.m2 > 0.0))
        throw PreconditionError(
            "u_taylor: closed-form expansion requires two-way migration");
    const Series z = Series::variable(z_star);
    const Series zp = z + p.theta;
    const Series zm = z - p.theta;
    const Series a = (p.r1 - p.m1 - p.kappa1 * N_star.N1) - p.g1 * (zp * zp);
    const Series b = (p.r2 - p.m2 - p.kappa2 * N_star.N2) - p.g2 * (zm * zm);
    const Series W =
        0.5 * ((a + b) + sqrt((a - b) * (a - b) + 4.0 * p.m1 * p.m2));
    const Series f = -W; // local expansion of -fitness
    const double scale = std::max(1.0, std::abs(f[2]));
    if (std::abs(f[0]) > 1e-7 * scale || std::abs(f[1]) > 1e-6 * scale)
        throw PreconditionError(
            "u_taylor: z_star is not a zero-fitness optimum at the given "
            "population sizes");
    const double a2 = f[2];
    if (a2 < 1e-12)
        throw NumericalError(
            "u_taylor: degenerate quadratic, the fitness maximum is flat");
    UTaylor t;
    t.z_star = z_star;
    t.A = std::sqrt(a2);
    t.B = -f[3] / (6.0 * t.A);
    t.C = -f[4] / (8.0 * t.A) + f[3] * f[3] / (32.0 * a2 * t.A);
    return t;
}

SourceSinkU source_sink_u(const std::vector<double>& grid,
                          const SourceSinkEss& ess, const ModelParams& p,
                          const UProfileOptions& opt) {
    const RegimeReport rep = check_assumptions(p);
    if (rep.regime != Regime::SourceSink)
        throw PreconditionError("source_sink_u: one-way migration regime required");
    if (std::abs(ess.condition_gap) <= kBoundaryTol)
        throw PreconditionError(
            "source_sink_u: degenerate boundary, m1(r1-m1)/kappa1 = "
            "4 g2 theta^2 r2/kappa2; the sink profile at +theta is undetermined");

    const double th = p.theta;
    const double sg1 = std::sqrt(p.g1);
    const double sg2 = std::sqrt(p.g2);

    SourceSinkU out;
    out.patch2_dimorphic = ess.patch2.kind == EssKind::Dimorphic;
    out.coef_minus = 0.5 * sg1;
    out.coef_plus = out.patch2_dimorphic ? 0.5 * sg2 : 0.0;

    // habitat 1: exact parabola
    std::vector<double> z1 =
        opt.insert_support ? merged_grid(grid, {-th}) : grid;
    out.u1.z = z1;
    out.u1.support = {-th};
    out.u1.u.resize(z1.size());
    for (std::size_t j = 0; j < z1.size(); ++j) {
        const double s = z1[j] + th;
        out.u1.u[j] = -0.5 * sg1 * s * s;
    }

    // habitat 2: the bound anchored at both optima
    const double N2 = ess.patch2.N_star.N2;
    Fn W2 = [&](double z) {
        const double zp = z + th;
        return std::max(-p.g1 * zp * zp, growth_rate(z, N2, 2, p));
    };
    out.u2_upper = build_profile(grid, {-th, th}, W2, opt, "source_sink_u");

    // where the bound already touches a local parabola the profile is pinned
    const auto& zz = out.u2_upper.z;
    const auto& ub = out.u2_upper.u;
    auto pinned_interval = [&](double center, double coef, double* lo,
                               double* hi) {
        const int n = static_cast<int>(zz.size());
        int jc = static_cast<int>(
            std::lower_bound(zz.begin(), zz.end(), center) - zz.begin());
        jc = std::clamp(jc, 0, n - 1);
        auto pinned = [&](int j) {
            const double s = zz[j] - center;
            return std::abs(ub[j] + coef * s * s) <=
                   1e-8 * (1.0 + std::abs(ub[j]));
        };
        int a = jc, b = jc;
        while (a > 0 && pinned(a - 1)) --a;
        while (b + 1 < n && pinned(b + 1)) ++b;
        *lo = zz[a];
        *hi = zz[b];
    };
    pinned_interval(-th, out.coef_minus, &out.interval_minus_lo,
                    &out.interval_minus_hi);
    if (out.patch2_dimorphic) {
        pinned_interval(th, out.coef_plus, &out.interval_plus_lo,
                        &out.interval_plus_hi);
    } else {
        out.u2_negative_at_plus = true;
    }
    {
        const int n = static_cast<int>(zz.size());
        int jc = static_cast<int>(
            std::lower_bound(zz.begin(), zz.end(), th) - zz.begin());
        jc = std::clamp(jc, 0, n - 1);
        out.u2_bound_at_plus = ub[jc];
    }
    return out;
}

} // namespace metapop
