#include "metapop/roots.hpp"

#include <algorithm>
#include <cmath>

#include "metapop/errors.hpp"

namespace metapop {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              const BisectOptions& opt) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericalError("bisect: no sign change on the given bracket");
    for (int it = 0; it < opt.max_iter && hi - lo > opt.x_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // bracket at floating-point resolution
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

int solve_depressed_cubic(double p, double q, double roots[3]) {
    if (p == 0.0 && q == 0.0) {
        roots[0] = 0.0;
        return 1;
    }
    const double half_q = 0.5 * q;
    const double third_p = p / 3.0;
    const double disc = half_q * half_q + third_p * third_p * third_p;
    if (disc > 0.0) {
        // one real root (Cardano)
        const double s = std::sqrt(disc);
        roots[0] = std::cbrt(-half_q + s) + std::cbrt(-half_q - s);
        return 1;
    }
    // three real roots (possibly repeated), p <= 0 here
    const double m = std::sqrt(-third_p);
    if (m == 0.0) {
        roots[0] = 0.0;
        return 1;
    }
    double c = -half_q / (m * m * m);
    c = std::clamp(c, -1.0, 1.0);
    const double phi = std::acos(c) / 3.0;
    const double two_pi_3 = 2.0943951023931953; // 2*pi/3
    roots[0] = 2.0 * m * std::cos(phi);
    roots[1] = 2.0 * m * std::cos(phi - two_pi_3);
    roots[2] = 2.0 * m * std::cos(phi + two_pi_3);
    std::sort(roots, roots + 3);
    return 3;
}

} // namespace metapop
