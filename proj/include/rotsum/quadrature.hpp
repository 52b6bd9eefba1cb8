#pragma once

// Adaptive Gauss-Kronrod (G7, K15) quadrature for smooth integrands on finite
// intervals. Panels split until the K15-G7 discrepancy meets the tolerance.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace rotsum {

namespace detail {

// Nodes/weights for the 15-point Kronrod extension of 7-point Gauss.
inline const double kGK15Nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline const double kGK15Weights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline const double kG7Weights[8] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870, 0.0};

struct GKResult {
    double value;
    double error;
};

template <typename F>
GKResult gk15(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc15 = 0.0, acc7 = 0.0;
    for (int i = 0; i < 15; ++i) {
        double v = f(mid + half * kGK15Nodes[i]);
        acc15 += kGK15Weights[i] * v;
        if (i % 2 == 1) acc7 += kG7Weights[i / 2] * v;
    }
    double value = acc15 * half;
    double err = std::abs((acc15 - acc7) * half);
    return {value, err};
}

template <typename F>
double adaptive_gk_rec(const F& f, double a, double b, double tol, int depth) {
    GKResult r = gk15(f, a, b);
    if (r.error <= tol || depth >= 48) {
        if (depth >= 48 && r.error > 1e3 * tol)
            throw std::runtime_error("adaptive quadrature failed to converge");
        return r.value;
    }
    double mid = 0.5 * (a + b);
    return adaptive_gk_rec(f, a, mid, 0.5 * tol, depth + 1) + adaptive_gk_rec(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

// Integral of f over [a, b] with absolute error target tol.
template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-11) {
    if (!(b > a)) return 0.0;
    return detail::adaptive_gk_rec(f, a, b, tol, 0);
}

}  // namespace rotsum
