#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metapop/model.hpp"
#include "metapop/moments.hpp"

namespace metapop {

// Steady state of the mutation-selection-migration system at mutation scale
// eps, computed by semi-implicit parabolic relaxation on [-L, L] with
// no-flux boundaries (diffusion implicit via a tridiagonal solve, reaction
// and migration explicit with the sizes frozen per step).
struct FdOptions {
    double eps = 0.05;
    double L = 0.0;    // 0 means theta + 3
    int n_pts = 2001;  // >= 801
    enum class Init { CenterZero, CenterMinusTheta, CenterPlusTheta, Custom };
    Init init = Init::CenterZero;
    std::vector<double> init_n1, init_n2; // used when init == Custom
    long max_steps = 4000000;
    double tol = 1e-10; // sup-norm of the time increment per unit time
};

const char* init_name(FdOptions::Init init);

struct GridSolution {
    std::vector<double> z;
    std::vector<double> n1, n2;
    double N1 = 0.0, N2 = 0.0;
    double eps = 0.0;
    double residual = 0.0; // sup-norm steady-state defect
    long iterations = 0;
};

GridSolution steady_state_solve(const ModelParams& p, const FdOptions& opt);

// Trapezoid-rule size, mean, central variance and standardized third moment
// per habitat.
MomentSummary numeric_moments(const GridSolution& gs);

// Log-density transform u_i = eps log(sqrt(2 pi eps) n_i); points where the
// density underflows (below 1e-300) are masked out.
struct DensityLog {
    std::vector<double> z;
    std::vector<double> u1, u2;
    std::vector<std::uint8_t> ok1, ok2;
};

DensityLog u_from_density(const GridSolution& gs);

// One comparison row of the eps-sweep: a quantity ("N1", "mean2", ...), its
// finite-difference and asymptotic values, the absolute error and the
// Richardson ratio error(previous eps)/error(this eps) (absent on the first
// eps).
struct SweepRow {
    double eps = 0.0;
    std::string quantity;
    double fd = 0.0;
    double asymptotic = 0.0;
    double error = 0.0;
    double ratio = 0.0;
    bool has_ratio = false;
};

// Runs the solver for each eps (strictly decreasing) and compares against
// the asymptotic moment predictions of the monomorphic two-way equilibrium.
std::vector<SweepRow> epsilon_sweep_compare(const ModelParams& p,
                                            const std::vector<double>& eps_list,
                                            const FdOptions& base);

} // namespace metapop
