#pragma once

#include <array>
#include <functional>
#include <vector>

namespace pancake {

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

/// Bisection on a bracketing interval [lo, hi] with f(lo), f(hi) of opposite
/// sign; returns the midpoint of the final bracket. Throws if not bracketed.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double x_tol, int max_iter = 200);

/// Dormand-Prince 5(4) adaptive step integrator for small ODE systems.
/// Integrates y' = f(s, y) from s0 while keep_going(s, y) stays true, or
/// until s reaches s_max. Records every accepted step in (ss, ys).
struct OdeResult {
    std::vector<double> ss;
    std::vector<std::array<double, 4>> ys;
};

OdeResult integrate_ode(
    const std::function<std::array<double, 4>(double, const std::array<double, 4>&)>& f,
    std::array<double, 4> y0, double s0, double s_max, double tol,
    const std::function<bool(double, const std::array<double, 4>&)>& keep_going);

/// Smooth-parametrization curve derivatives: given closed or open samples of
/// a curve that are smooth in the node index, returns 4th-order centered
/// finite-difference first and second derivatives with respect to the index.
struct IndexDerivatives {
    std::vector<double> d1, d2;
};

IndexDerivatives index_derivatives(const std::vector<double>& v, bool periodic);

}  // namespace pancake
