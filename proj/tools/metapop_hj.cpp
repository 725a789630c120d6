#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metapop/correctors.hpp"
#include "metapop/errors.hpp"
#include "metapop/ess.hpp"
#include "metapop/fd.hpp"
#include "metapop/hj.hpp"
#include "metapop/io.hpp"
#include "metapop/model.hpp"
#include "metapop/moments.hpp"

namespace {

using namespace metapop;

struct CliOptions {
    std::string config;
    std::string out = ".";
    std::string format = "csv";
    double eps = 0.0;
    std::string eps_list;
    double L = 0.0;
    int n_pts = 2001;
};

std::vector<double> parse_eps_list(const CliOptions& o, bool required) {
    std::vector<double> eps;
    if (!o.eps_list.empty()) {
        std::string cur;
        for (char c : o.eps_list + ",") {
            if (c == ',') {
                if (cur.empty())
                    throw PreconditionError("--eps-list: empty entry");
                char* end = nullptr;
                eps.push_back(std::strtod(cur.c_str(), &end));
                if (!end || *end != '\0')
                    throw PreconditionError("--eps-list: invalid number '" + cur + "'");
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
    } else if (o.eps > 0.0) {
        eps.push_back(o.eps);
    }
    if (eps.empty()) {
        if (required)
            throw PreconditionError("--eps or --eps-list is required for this command");
        return eps;
    }
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0.0))
            throw PreconditionError("eps values must be positive");
        if (k > 0 && !(eps[k] < eps[k - 1]))
            throw PreconditionError("eps list must be strictly decreasing");
    }
    return eps;
}

void emit(const CliOptions& o, const std::string& stem, const io::Record& r) {
    const std::string path = o.out + "/" + stem + "." + o.format;
    io::write_file(path, o.format == "json" ? io::to_json(r) : io::to_csv(r));
    std::cerr << "[metapop-hj] wrote " << path << "\n";
}

void emit(const CliOptions& o, const std::string& stem, const io::Table& t) {
    const std::string path = o.out + "/" + stem + "." + o.format;
    io::write_file(path, o.format == "json" ? io::to_json(t) : io::to_csv(t));
    std::cerr << "[metapop-hj] wrote " << path << "\n";
}

void add_conditions(io::Record& r, const DimorphismConditions& cond) {
    r.add("c1", cond.c1);
    if (cond.applicable23) {
        r.add("c2", cond.c2);
        r.add("c3", cond.c3);
    } else {
        r.add("c2", std::string());
        r.add("c3", std::string());
    }
}

void add_ess(io::Record& r, const std::string& prefix, const Ess& ess) {
    r.add(prefix + "kind",
          std::string(ess.kind == EssKind::Monomorphic ? "monomorphic" : "dimorphic"));
    if (ess.kind == EssKind::Monomorphic) {
        r.add(prefix + "z_star", ess.z_star);
    } else {
        r.add(prefix + "z_I", ess.z_I);
        r.add(prefix + "z_II", ess.z_II);
        r.add(prefix + "nu_I_1", ess.nu[0][0]);
        r.add(prefix + "nu_I_2", ess.nu[0][1]);
        r.add(prefix + "nu_II_1", ess.nu[1][0]);
        r.add(prefix + "nu_II_2", ess.nu[1][1]);
    }
    r.add(prefix + "N1", ess.N_star.N1);
    r.add(prefix + "N2", ess.N_star.N2);
    r.add(prefix + "mu1", ess.mu_star.mu1);
    r.add(prefix + "mu2", ess.mu_star.mu2);
    r.add(prefix + "boundary_case", ess.boundary_case);
}

int cmd_check(const CliOptions& o, const ModelParams& p) {
    const RegimeReport rep = check_assumptions(p);
    io::Record r;
    r.add("regime", std::string(regime_name(rep.regime)));
    r.add("violated", rep.violated);
    r.add("r1_minus_m1", p.r1 - p.m1);
    r.add("r2_minus_m2", p.r2 - p.m2);
    emit(o, "check", r);
    if (rep.regime == Regime::Invalid) {
        std::cerr << "[metapop-hj] check: invalid parameters: " << rep.violated
                  << "\n";
        return 2;
    }
    std::cerr << "[metapop-hj] check: regime " << regime_name(rep.regime) << "\n";
    return 0;
}

int cmd_ess(const CliOptions& o, const ModelParams& p) {
    const RegimeReport rep = check_assumptions(p);
    io::Record r;
    r.add("regime", std::string(regime_name(rep.regime)));
    if (rep.regime == Regime::SourceSink) {
        const SourceSinkEss ss = source_sink_ess(p);
        add_ess(r, "patch1_", ss.patch1);
        add_ess(r, "patch2_", ss.patch2);
        r.add("condition_gap", ss.condition_gap);
    } else {
        const Ess ess = solve_ess(p); // rejects invalid regimes
        add_ess(r, "", ess);
        add_conditions(r, ess.cond);
    }
    emit(o, "ess", r);
    return 0;
}

int cmd_profile(const CliOptions& o, const ModelParams& p) {
    const RegimeReport rep = check_assumptions(p);
    const std::vector<double> grid = default_grid(p);
    if (rep.regime == Regime::SourceSink) {
        const SourceSinkEss ss = source_sink_ess(p);
        const SourceSinkU u = source_sink_u(grid, ss, p);
        io::Table t;
        t.columns = {"z", "u1", "u2_upper"};
        for (std::size_t j = 0; j < u.u2_upper.z.size(); ++j) {
            const double z = u.u2_upper.z[j];
            const double s = z + p.theta;
            t.rows.push_back({z, -0.5 * std::sqrt(p.g1) * s * s, u.u2_upper.u[j]});
        }
        emit(o, "profile", t);
        io::Record r;
        r.add("patch2_kind", std::string(u.patch2_dimorphic ? "dimorphic"
                                                            : "monomorphic"));
        r.add("parabola_coef_minus_theta", u.coef_minus);
        r.add("pinned_lo_minus_theta", u.interval_minus_lo);
        r.add("pinned_hi_minus_theta", u.interval_minus_hi);
        if (u.patch2_dimorphic) {
            r.add("parabola_coef_plus_theta", u.coef_plus);
            r.add("pinned_lo_plus_theta", u.interval_plus_lo);
            r.add("pinned_hi_plus_theta", u.interval_plus_hi);
        } else {
            r.add("u2_negative_at_plus_theta", u.u2_negative_at_plus);
        }
        r.add("u2_upper_bound_at_plus_theta", u.u2_bound_at_plus);
        emit(o, "profile_summary", r);
        return 0;
    }
    const Ess ess = solve_ess(p);
    const UProfile prof = u_profile(grid, ess, p);
    io::Table t;
    t.columns = {"z", "u"};
    for (std::size_t j = 0; j < prof.z.size(); ++j)
        t.rows.push_back({prof.z[j], prof.u[j]});
    emit(o, "profile", t);
    return 0;
}

io::Record correctors_record(const Ess& ess, const UTaylor& ut,
                             const CorrectorSet& cs, const std::string& regime) {
    io::Record r;
    r.add("regime", regime);
    r.add("z_star", cs.z_star);
    r.add("N1", ess.N_star.N1);
    r.add("N2", ess.N_star.N2);
    r.add("A", ut.A);
    r.add("B", ut.B);
    r.add("C", ut.C);
    r.add("v_offset_1", cs.v_offset[0]);
    r.add("v_offset_2", cs.v_offset[1]);
    r.add("D_1", cs.D[0]);
    r.add("D_2", cs.D[1]);
    r.add("E_1", cs.E[0]);
    r.add("E_2", cs.E[1]);
    r.add("F_1", cs.F[0]);
    r.add("F_2", cs.F[1]);
    r.add("K_1", cs.K[0]);
    r.add("K_2", cs.K[1]);
    r.add("lambda1", cs.lambda1);
    r.add("lambda2", cs.lambda2);
    r.add("lambda3", cs.lambda3);
    r.add("G_gap", cs.G_gap);
    return r;
}

int cmd_correctors(const CliOptions& o, const ModelParams& p) {
    const RegimeReport rep = check_assumptions(p);
    if (rep.regime == Regime::SourceSink) {
        const SourceSinkEss ss = source_sink_ess(p);
        if (ss.patch2.kind != EssKind::Monomorphic ||
            std::abs(ss.condition_gap) <= kBoundaryTol)
            throw PreconditionError(
                "correctors: the one-way chain is available only for the "
                "strictly monomorphic sink; the dimorphic sink chain is not "
                "provided");
        const CorrectorSet cs = source_sink_correctors(ss, p);
        UTaylor ut;
        ut.z_star = -p.theta;
        ut.A = std::sqrt(p.g1);
        io::Record r = correctors_record(ss.patch2, ut, cs, "source_sink");
        emit(o, "correctors", r);
        return 0;
    }
    const Ess ess = solve_ess(p);
    if (ess.kind != EssKind::Monomorphic)
        throw PreconditionError(
            "correctors: the equilibrium is dimorphic; the corrector chain "
            "is provided only for monomorphic equilibria");
    const UTaylor ut = u_taylor(ess.z_star, ess.N_star, p);
    const CorrectorSet cs = corrector_set(ess, ut, p);
    io::Record r = correctors_record(ess, ut, cs, "two_way");
    emit(o, "correctors", r);
    return 0;
}

int cmd_moments(const CliOptions& o, const ModelParams& p) {
    const std::vector<double> eps = parse_eps_list(o, true);
    const Ess ess = solve_ess(p);
    if (ess.kind != EssKind::Monomorphic)
        throw PreconditionError(
            "moments: asymptotic moment formulas require a monomorphic "
            "equilibrium");
    const UTaylor ut = u_taylor(ess.z_star, ess.N_star, p);
    const CorrectorSet cs = corrector_set(ess, ut, p);
    io::Table t;
    t.columns = {"eps", "habitat", "N", "mean", "variance", "skewness", "source"};
    for (double e : eps) {
        const MomentSummary m = asymptotic_moments(ess, ut, cs, e);
        for (int i = 0; i < 2; ++i)
            t.rows.push_back({e, static_cast<double>(i + 1), m.N[i], m.mean[i],
                              m.variance[i], m.skewness[i],
                              std::string("asymptotic")});
    }
    emit(o, "moments", t);
    return 0;
}

int cmd_solve(const CliOptions& o, const ModelParams& p) {
    if (!(o.eps > 0.0))
        throw PreconditionError("solve: --eps is required and must be positive");
    FdOptions opt;
    opt.eps = o.eps;
    opt.L = o.L;
    opt.n_pts = o.n_pts;
    const GridSolution gs = steady_state_solve(p, opt);
    io::Table t;
    t.columns = {"z", "n1", "n2"};
    for (std::size_t j = 0; j < gs.z.size(); ++j)
        t.rows.push_back({gs.z[j], gs.n1[j], gs.n2[j]});
    emit(o, "solve", t);
    io::Record r;
    r.add("eps", gs.eps);
    r.add("N1", gs.N1);
    r.add("N2", gs.N2);
    r.add("residual", gs.residual);
    r.add("iterations", static_cast<double>(gs.iterations));
    r.add("L", o.L > 0.0 ? o.L : p.theta + 3.0);
    r.add("n_pts", static_cast<double>(o.n_pts));
    r.add("init", std::string(init_name(opt.init)));
    emit(o, "solve_summary", r);
    return 0;
}

int cmd_compare(const CliOptions& o, const ModelParams& p) {
    const std::vector<double> eps = parse_eps_list(o, true);
    FdOptions opt;
    opt.L = o.L;
    opt.n_pts = o.n_pts;
    const std::vector<SweepRow> rows = epsilon_sweep_compare(p, eps, opt);
    io::Table t;
    t.columns = {"eps", "quantity", "fd", "asymptotic", "error", "ratio"};
    for (const SweepRow& row : rows) {
        io::Value ratio = row.has_ratio ? io::Value(row.ratio)
                                        : io::Value(std::string());
        t.rows.push_back({row.eps, row.quantity, row.fd, row.asymptotic,
                          row.error, ratio});
    }
    emit(o, "compare", t);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-habitat selection-mutation-migration equilibria: exact "
                 "evolutionary optima, Hamilton-Jacobi asymptotics with "
                 "first-order corrections, and a finite-difference solver for "
                 "cross-validation"};
    app.require_subcommand(1);

    CliOptions o;
    std::string command;
    for (const char* name : {"check", "ess", "profile", "correctors", "moments",
                             "solve", "compare"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", o.config, "flat key = value parameter file")
            ->required();
        sub->add_option("--out", o.out, "output directory (default '.')");
        sub->add_option("--format", o.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--eps", o.eps, "mutation scale");
        sub->add_option("--eps-list", o.eps_list,
                        "comma-separated decreasing mutation scales");
        sub->add_option("--L", o.L, "half-width of the solver domain");
        sub->add_option("--n-pts", o.n_pts, "solver grid points (>= 801)");
        sub->callback([&command, name]() { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        std::filesystem::create_directories(o.out);
        const metapop::ModelParams p = metapop::io::read_config(o.config);
        if (command == "check") return cmd_check(o, p);
        if (command == "ess") return cmd_ess(o, p);
        if (command == "profile") return cmd_profile(o, p);
        if (command == "correctors") return cmd_correctors(o, p);
        if (command == "moments") return cmd_moments(o, p);
        if (command == "solve") return cmd_solve(o, p);
        if (command == "compare") return cmd_compare(o, p);
        std::cerr << "[metapop-hj] unknown command\n";
        return 2;
    } catch (const metapop::PreconditionError& e) {
        std::cerr << "[metapop-hj] " << command << ": " << e.what() << "\n";
        return 2;
    } catch (const metapop::NumericalError& e) {
        std::cerr << "[metapop-hj] " << command << ": " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "[metapop-hj] " << command << ": " << e.what() << "\n";
        return 2;
    }
}
