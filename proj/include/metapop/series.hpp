#pragma once

#include <array>
#include <cmath>

#include "metapop/errors.hpp"

namespace metapop {

// Truncated Taylor series a0 + a1 s + ... + a4 s^4. Five coefficients cover
// everything needed here: fourth-order fitness expansions and second-order
// corrector algebra. Operations truncate at degree 4.
struct Series {
    static constexpr int N = 5;
    std::array<double, N> c{};

    static Series constant(double v) {
        Series s;
        s.c[0] = v;
        return s;
    }
    // value v at s = 0, unit slope: represents v + s
    static Series variable(double v) {
        Series s;
        s.c[0] = v;
        s.c[1] = 1.0;
        return s;
    }
    double operator[](int k) const { return c[k]; }
};

inline Series operator+(const Series& a, const Series& b) {
    Series r;
    for (int k = 0; k < Series::N; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
}

inline Series operator-(const Series& a, const Series& b) {
    Series r;
    for (int k = 0; k < Series::N; ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
}

inline Series operator-(const Series& a) {
    Series r;
    for (int k = 0; k < Series::N; ++k) r.c[k] = -a.c[k];
    return r;
}

inline Series operator*(const Series& a, const Series& b) {
    Series r;
    for (int k = 0; k < Series::N; ++k) {
        double acc = 0.0;
        for (int i = 0; i <= k; ++i) acc += a.c[i] * b.c[k - i];
        r.c[k] = acc;
    }
    return r;
}

inline Series operator*(double s, const Series& a) {
    Series r;
    for (int k = 0; k < Series::N; ++k) r.c[k] = s * a.c[k];
    return r;
}

inline Series operator+(const Series& a, double s) { return a + Series::constant(s); }
inline Series operator+(double s, const Series& a) { return a + Series::constant(s); }
inline Series operator-(const Series& a, double s) { return a - Series::constant(s); }
inline Series operator-(double s, const Series& a) { return Series::constant(s) - a; }

inline Series reciprocal(const Series& b) {
    if (b.c[0] == 0.0)
        throw NumericalError("series reciprocal: zero constant term");
    Series r;
    r.c[0] = 1.0 / b.c[0];
    for (int k = 1; k < Series::N; ++k) {
        double acc = 0.0;
        for (int i = 1; i <= k; ++i) acc += b.c[i] * r.c[k - i];
        r.c[k] = -acc / b.c[0];
    }
    return r;
}

inline Series operator/(const Series& a, const Series& b) { return a * reciprocal(b); }

inline Series sqrt(const Series& a) {
    if (!(a.c[0] > 0.0))
        throw NumericalError("series sqrt: nonpositive constant term");
    Series r;
    r.c[0] = std::sqrt(a.c[0]);
    for (int k = 1; k < Series::N; ++k) {
        double acc = 0.0;
        for (int i = 1; i < k; ++i) acc += r.c[i] * r.c[k - i];
        r.c[k] = (a.c[k] - acc) / (2.0 * r.c[0]);
    }
    return r;
}

inline Series log(const Series& a) {
    if (!(a.c[0] > 0.0))
        throw NumericalError("series log: nonpositive constant term");
    // (log a)' = a'/a, integrated termwise
    const Series inv = reciprocal(a);
    Series da;
    for (int k = 0; k + 1 < Series::N; ++k) da.c[k] = (k + 1) * a.c[k + 1];
    const Series d = da * inv;
    Series r;
    r.c[0] = std::log(a.c[0]);
    for (int k = 1; k < Series::N; ++k) r.c[k] = d.c[k - 1] / k;
    return r;
}

inline Series exp(const Series& a) {
    Series w = a;
    w.c[0] = 0.0;
    Series sum = Series::constant(1.0);
    Series pw = Series::constant(1.0);
    double fact = 1.0;
    for (int k = 1; k < Series::N; ++k) {
        pw = pw * w;
        fact *= k;
        sum = sum + (1.0 / fact) * pw;
    }
    return std::exp(a.c[0]) * sum;
}

} // namespace metapop
