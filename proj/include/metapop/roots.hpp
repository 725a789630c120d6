#pragma once

#include <functional>

namespace metapop {

struct BisectOptions {
    double x_tol = 1e-12;
    int max_iter = 200;
};

// Bisection on [lo, hi]. f(lo) and f(hi) must have opposite signs; an exact
// zero at an endpoint is returned directly. Throws NumericalError when the
// bracket is invalid.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              const BisectOptions& opt = {});

// Real roots of the depressed cubic t^3 + p t + q = 0, ascending order.
// Returns the number of roots written (1..3). Multiple roots may be
// reported more than once.
int solve_depressed_cubic(double p, double q, double roots[3]);

} // namespace metapop
