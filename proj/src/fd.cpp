#include "metapop/fd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "metapop/correctors.hpp"
#include "metapop/errors.hpp"
#include "metapop/ess.hpp"
#include "metapop/hj.hpp"

namespace metapop {

namespace {

double trapezoid(const std::vector<double>& f, double dz) {
    double acc = 0.5 * (f.front() + f.back());
    for (std::size_t j = 1; j + 1 < f.size(); ++j) acc += f[j];
    return acc * dz;
}

// Solves (I - alpha D2) x = rhs with the no-flux stencil
// D2 x|_0 = 2(x_1 - x_0), D2 x|_last = 2(x_{n-2} - x_{n-1}) (unit spacing
// folded into alpha). Thomas algorithm; diag/work are scratch.
void diffuse_implicit(std::vector<double>& x, const std::vector<double>& rhs,
                      double alpha, std::vector<double>& diag,
                      std::vector<double>& work) {
    const int n = static_cast<int>(rhs.size());
    const double b = 1.0 + 2.0 * alpha;
    diag[0] = b;
    work[0] = rhs[0];
    for (int j = 1; j < n; ++j) {
        const double aj = (j == n - 1) ? -2.0 * alpha : -alpha;
        const double cjm1 = (j == 1) ? -2.0 * alpha : -alpha;
        const double w = aj / diag[j - 1];
        diag[j] = b - w * cjm1;
        work[j] = rhs[j] - w * work[j - 1];
    }
    x[n - 1] = work[n - 1] / diag[n - 1];
    for (int j = n - 2; j >= 0; --j) {
        const double cj = (j == 0) ? -2.0 * alpha : -alpha;
        x[j] = (work[j] - cj * x[j + 1]) / diag[j];
    }
}

struct Defect {
    double sup = 0.0;
};

// Elliptic defect eps^2 n'' + n (R - m_i) + m_j n_j at the current field.
double steady_defect(const ModelParams& p, double eps, double dz,
                     const std::vector<double>& q1, const std::vector<double>& q2,
                     const std::vector<double>& n1, const std::vector<double>& n2,
                     double N1, double N2) {
    const int n = static_cast<int>(n1.size());
    const double e2 = eps * eps / (dz * dz);
    double sup = 0.0;
    for (int j = 0; j < n; ++j) {
        double lap1, lap2;
        if (j == 0) {
            lap1 = 2.0 * (n1[1] - n1[0]);
            lap2 = 2.0 * (n2[1] - n2[0]);
        } else if (j == n - 1) {
            lap1 = 2.0 * (n1[n - 2] - n1[n - 1]);
            lap2 = 2.0 * (n2[n - 2] - n2[n - 1]);
        } else {
            lap1 = n1[j - 1] - 2.0 * n1[j] + n1[j + 1];
            lap2 = n2[j - 1] - 2.0 * n2[j] + n2[j + 1];
        }
        const double d1 = e2 * lap1 + n1[j] * (q1[j] - p.kappa1 * N1 - p.m1) +
                          p.m2 * n2[j];
        const double d2 = e2 * lap2 + n2[j] * (q2[j] - p.kappa2 * N2 - p.m2) +
                          p.m1 * n1[j];
        sup = std::max(sup, std::max(std::abs(d1), std::abs(d2)));
    }
    return sup;
}

} // namespace

const char* init_name(FdOptions::Init init) {
    switch (init) {
        case FdOptions::Init::CenterZero: return "center_zero";
        case FdOptions::Init::CenterMinusTheta: return "center_minus_theta";
        case FdOptions::Init::CenterPlusTheta: return "center_plus_theta";
        default: return "custom";
    }
}

GridSolution steady_state_solve(const ModelParams& p, const FdOptions& opt) {
    const RegimeReport rep = check_assumptions(p);
    if (rep.regime == Regime::Invalid)
        throw PreconditionError("steady_state_solve: " + rep.violated);
    if (!(opt.eps > 0.0))
        throw PreconditionError("steady_state_solve: eps must be positive");
    const double L = opt.L > 0.0 ? opt.L : p.theta + 3.0;
    if (L < p.theta + 2.0)
        throw PreconditionError("steady_state_solve: domain half-width L >= theta + 2 required");
    if (opt.n_pts < 801)
        throw PreconditionError("steady_state_solve: n_pts >= 801 required");

    const int n = opt.n_pts;
    const double dz = 2.0 * L / (n - 1);

    GridSolution gs;
    gs.eps = opt.eps;
    gs.z.resize(n);
    for (int j = 0; j < n; ++j) gs.z[j] = -L + j * dz;

    // off-competition parts of the growth rates and their ranges
    std::vector<double> q1(n), q2(n);
    double q1min = 1e300, q1max = -1e300, q2min = 1e300, q2max = -1e300;
    for (int j = 0; j < n; ++j) {
        const double zp = gs.z[j] + p.theta;
        const double zm = gs.z[j] - p.theta;
        q1[j] = p.r1 - p.g1 * zp * zp;
        q2[j] = p.r2 - p.g2 * zm * zm;
        q1min = std::min(q1min, q1[j]);
        q1max = std::max(q1max, q1[j]);
        q2min = std::min(q2min, q2[j]);
        q2max = std::max(q2max, q2[j]);
    }

    auto gaussian_init = [&](double center, std::vector<double>& out) {
        out.resize(n);
        const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
        for (int j = 0; j < n; ++j) {
            const double d = gs.z[j] - center;
            out[j] = norm * std::exp(-0.5 * d * d);
        }
    };
    switch (opt.init) {
        case FdOptions::Init::CenterZero:
            gaussian_init(0.0, gs.n1);
            gaussian_init(0.0, gs.n2);
            break;
        case FdOptions::Init::CenterMinusTheta:
            gaussian_init(-p.theta, gs.n1);
            gaussian_init(-p.theta, gs.n2);
            break;
        case FdOptions::Init::CenterPlusTheta:
            gaussian_init(p.theta, gs.n1);
            gaussian_init(p.theta, gs.n2);
            break;
        case FdOptions::Init::Custom:
            if (static_cast<int>(opt.init_n1.size()) != n ||
                static_cast<int>(opt.init_n2.size()) != n)
                throw PreconditionError(
                    "steady_state_solve: custom initialization size mismatch");
            gs.n1 = opt.init_n1;
            gs.n2 = opt.init_n2;
            break;
    }

    double N1 = trapezoid(gs.n1, dz);
    double N2 = trapezoid(gs.n2, dz);

    std::vector<double> s1(n), s2(n), diag(n), work(n);
    std::vector<double> next1(n), next2(n);

    long step = 0;
    bool converged = false;
    for (; step < opt.max_steps; ++step) {
        if (N1 + N2 < 1e-12)
            throw NumericalError(
                "steady_state_solve: population went extinct during "
                "relaxation");
        const double maxR = std::max(
            std::max(std::abs(q1max - p.kappa1 * N1), std::abs(q1min - p.kappa1 * N1)),
            std::max(std::abs(q2max - p.kappa2 * N2), std::abs(q2min - p.kappa2 * N2)));
        const double dt = 0.1 / std::max(maxR, 1e-8);
        const double alpha = opt.eps * opt.eps * dt / (dz * dz);

        for (int j = 0; j < n; ++j) {
            s1[j] = gs.n1[j] +
                    dt * (gs.n1[j] * (q1[j] - p.kappa1 * N1 - p.m1) +
                          p.m2 * gs.n2[j]);
            s2[j] = gs.n2[j] +
                    dt * (gs.n2[j] * (q2[j] - p.kappa2 * N2 - p.m2) +
                          p.m1 * gs.n1[j]);
        }
        diffuse_implicit(next1, s1, alpha, diag, work);
        diffuse_implicit(next2, s2, alpha, diag, work);

        double delta = 0.0;
        for (int j = 0; j < n; ++j) {
            if (next1[j] < 0.0) next1[j] = 0.0;
            if (next2[j] < 0.0) next2[j] = 0.0;
            delta = std::max(delta, std::abs(next1[j] - gs.n1[j]));
            delta = std::max(delta, std::abs(next2[j] - gs.n2[j]));
        }
        gs.n1.swap(next1);
        gs.n2.swap(next2);
        N1 = trapezoid(gs.n1, dz);
        N2 = trapezoid(gs.n2, dz);

        if (delta / dt < opt.tol) {
            const double defect =
                steady_defect(p, opt.eps, dz, q1, q2, gs.n1, gs.n2, N1, N2);
            if (defect < opt.tol) {
                gs.residual = defect;
                converged = true;
                ++step;
                break;
            }
        }
    }
    if (!converged) {
        const double defect =
            steady_defect(p, opt.eps, dz, q1, q2, gs.n1, gs.n2, N1, N2);
        std::ostringstream os;
        os << "steady_state_solve: no convergence after " << opt.max_steps
           << " steps (defect " << defect << ")";
        throw NumericalError(os.str());
    }
    gs.N1 = N1;
    gs.N2 = N2;
    gs.iterations = step;
    return gs;
}

MomentSummary numeric_moments(const GridSolution& gs) {
    MomentSummary m;
    m.eps = gs.eps;
    const double dz = gs.z[1] - gs.z[0];
    for (int i = 0; i < 2; ++i) {
        const std::vector<double>& nn = i == 0 ? gs.n1 : gs.n2;
        std::vector<double> f(nn.size());
        const double N = trapezoid(nn, dz);
        if (!(N > 0.0))
            throw NumericalError("numeric_moments: empty habitat density");
        for (std::size_t j = 0; j < nn.size(); ++j) f[j] = gs.z[j] * nn[j];
        const double mean = trapezoid(f, dz) / N;
        for (std::size_t j = 0; j < nn.size(); ++j) {
            const double d = gs.z[j] - mean;
            f[j] = d * d * nn[j];
        }
        const double var = trapezoid(f, dz) / N;
        for (std::size_t j = 0; j < nn.size(); ++j) {
            const double d = gs.z[j] - mean;
            f[j] = d * d * d * nn[j];
        }
        const double third = trapezoid(f, dz) / N;
        m.N[i] = N;
        m.mean[i] = mean;
        m.variance[i] = var;
        m.skewness[i] = var > 0.0 ? third / std::pow(var, 1.5) : 0.0;
    }
    return m;
}

DensityLog u_from_density(const GridSolution& gs) {
    DensityLog out;
    out.z = gs.z;
    const double pref = std::sqrt(2.0 * std::numbers::pi * gs.eps);
    const std::size_t n = gs.z.size();
    out.u1.assign(n, 0.0);
    out.u2.assign(n, 0.0);
    out.ok1.assign(n, 0);
    out.ok2.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        if (gs.n1[j] > 1e-300) {
            out.u1[j] = gs.eps * std::log(pref * gs.n1[j]);
            out.ok1[j] = 1;
        }
        if (gs.n2[j] > 1e-300) {
            out.u2[j] = gs.eps * std::log(pref * gs.n2[j]);
            out.ok2[j] = 1;
        }
    }
    return out;
}

std::vector<SweepRow> epsilon_sweep_compare(const ModelParams& p,
                                            const std::vector<double>& eps_list,
                                            const FdOptions& base) {
    if (eps_list.empty())
        throw PreconditionError("epsilon_sweep_compare: empty eps list");
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (!(eps_list[k] > 0.0))
            throw PreconditionError("epsilon_sweep_compare: eps must be positive");
        if (k > 0 && !(eps_list[k] < eps_list[k - 1]))
            throw PreconditionError(
                "epsilon_sweep_compare: eps list must be strictly decreasing");
    }
    const Ess ess = solve_ess(p);
    if (ess.kind != EssKind::Monomorphic)
        throw PreconditionError(
            "epsilon_sweep_compare: asymptotic moment formulas require a "
            "monomorphic equilibrium");
    const UTaylor ut = u_taylor(ess.z_star, ess.N_star, p);
    const CorrectorSet cs = corrector_set(ess, ut, p);

    std::vector<SweepRow> rows;
    std::vector<double> prev_err;
    for (double eps : eps_list) {
        FdOptions opt = base;
        opt.eps = eps;
        const GridSolution gs = steady_state_solve(p, opt);
        const MomentSummary fd = numeric_moments(gs);
        const MomentSummary asym = asymptotic_moments(ess, ut, cs, eps);
        const char* names[4] = {"N", "mean", "variance", "skewness"};
        std::vector<double> errs;
        for (int q = 0; q < 4; ++q) {
            for (int i = 0; i < 2; ++i) {
                double fv = 0.0, av = 0.0;
                switch (q) {
                    case 0: fv = fd.N[i]; av = asym.N[i]; break;
                    case 1: fv = fd.mean[i]; av = asym.mean[i]; break;
                    case 2: fv = fd.variance[i]; av = asym.variance[i]; break;
                    case 3: fv = fd.skewness[i]; av = asym.skewness[i]; break;
                }
                SweepRow row;
                row.eps = eps;
                row.quantity = std::string(names[q]) + (i == 0 ? "1" : "2");
                row.fd = fv;
                row.asymptotic = av;
                row.error = std::abs(fv - av);
                errs.push_back(row.error);
                if (!prev_err.empty()) {
                    const double e = row.error;
                    row.ratio = e > 0.0 ? prev_err[errs.size() - 1] / e : 0.0;
                    row.has_ratio = true;
                }
                rows.push_back(row);
            }
        }
        prev_err = errs;
    }
    return rows;
}

} // namespace metapop
