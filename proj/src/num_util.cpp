#include "pancake/num_util.hpp"

#include <cmath>
#include <stdexcept>

namespace pancake {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double fa, double b,
                        double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    return adaptive_simpson(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 48);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double x_tol,
                   int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw std::runtime_error("bisect_root: not bracketed");
    for (int it = 0; it < max_iter && (hi - lo) > x_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return 0.5 * (lo + hi);
}

OdeResult integrate_ode(
    const std::function<std::array<double, 4>(double, const std::array<double, 4>&)>& f,
    std::array<double, 4> y0, double s0, double s_max, double tol,
    const std::function<bool(double, const std::array<double, 4>&)>& keep_going) {
    // Dormand-Prince 5(4) coefficients.
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    using Y = std::array<double, 4>;
    auto axpy = [](Y y, double h, const Y& k) {
        for (int i = 0; i < 4; ++i) y[i] += h * k[i];
        return y;
    };

    OdeResult out;
    double s = s0, h = 1e-3;
    Y y = y0;
    out.ss.push_back(s);
    out.ys.push_back(y);
    Y k1 = f(s, y);
    int rejects_in_a_row = 0;
    while (s < s_max && keep_going(s, y)) {
        h = std::min(h, s_max - s);
        const Y k2 = f(s + c2 * h, axpy(y, h * a21, k1));
        Y tmp = y;
        for (int i = 0; i < 4; ++i) tmp[i] += h * (a31 * k1[i] + a32 * k2[i]);
        const Y k3 = f(s + c3 * h, tmp);
        tmp = y;
        for (int i = 0; i < 4; ++i) tmp[i] += h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const Y k4 = f(s + c4 * h, tmp);
        tmp = y;
        for (int i = 0; i < 4; ++i)
            tmp[i] += h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const Y k5 = f(s + c5 * h, tmp);
        tmp = y;
        for (int i = 0; i < 4; ++i)
            tmp[i] += h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const Y k6 = f(s + h, tmp);
        Y y5 = y;
        for (int i = 0; i < 4; ++i)
            y5[i] += h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        const Y k7 = f(s + h, y5);

        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                  e7 * k7[i]);
            const double sc = tol * (1.0 + std::abs(y[i]));
            err = std::max(err, std::abs(e) / sc);
        }
        if (err <= 1.0) {
            s += h;
            y = y5;
            k1 = k7;  // FSAL
            out.ss.push_back(s);
            out.ys.push_back(y);
            rejects_in_a_row = 0;
        } else if (++rejects_in_a_row > 64) {
            throw std::runtime_error("integrate_ode: step size collapsed");
        }
        const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::min(5.0, std::max(0.2, fac));
        if (h < 1e-14) throw std::runtime_error("integrate_ode: step underflow");
    }
    return out;
}

IndexDerivatives index_derivatives(const std::vector<double>& v, bool periodic) {
    const std::size_t n = v.size();
    IndexDerivatives out;
    out.d1.resize(n);
    out.d2.resize(n);
    auto at = [&](long i) -> double {
        if (periodic) {
            long m = i % static_cast<long>(n);
            if (m < 0) m += static_cast<long>(n);
            return v[static_cast<std::size_t>(m)];
        }
        // Clamp with linear extension so one-sided ends stay second order.
        if (i < 0) return 2.0 * v[0] - v[static_cast<std::size_t>(-i)];
        if (i >= static_cast<long>(n))
            return 2.0 * v[n - 1] - v[static_cast<std::size_t>(2 * (n - 1) - i)];
        return v[static_cast<std::size_t>(i)];
    };
    for (long i = 0; i < static_cast<long>(n); ++i) {
        const double m2 = at(i - 2), m1 = at(i - 1), p1 = at(i + 1), p2 = at(i + 2);
        out.d1[static_cast<std::size_t>(i)] = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / 12.0;
        out.d2[static_cast<std::size_t>(i)] =
            (-p2 + 16.0 * p1 - 30.0 * at(i) + 16.0 * m1 - m2) / 12.0;
    }
    return out;
}

}  // namespace pancake
