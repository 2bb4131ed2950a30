#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsr {

struct QuadratureSpec {
    double rel_tol = 1e-6;
    double abs_tol = 1e-12;
    int max_intervals = 4000;
    /// Outer improper integrals are cut where the integrand drops below this.
    double tail_epsilon = 1e-10;
};

class QuadratureError : public std::runtime_error {
public:
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// 15-point Kronrod nodes on [0,1] side (symmetric) with embedded 7-point Gauss.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

/// One Gauss-Kronrod 7/15 pass with the QUADPACK error heuristic.
template <class F>
Panel gk15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double result_gauss = kWg[3] * fc;
    double result_kronrod = kWgk[7] * fc;
    double resabs = std::abs(result_kronrod);
    double fv[15];
    fv[7] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        result_kronrod += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * result_kronrod;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));

    const double value = result_kronrod * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((result_kronrod - result_gauss) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double min_err = std::numeric_limits<double>::epsilon() * 50.0 * resabs;
    err = std::max(err, min_err);
    return Panel{a, b, value, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
/// Throws QuadratureError if the requested tolerance cannot be met.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec) {
    if (a == b) return 0.0;
    std::priority_queue<detail::Panel> heap;
    detail::Panel first = detail::gk15(f, a, b);
    double total_value = first.value;
    double total_error = first.error;
    heap.push(first);

    int n_panels = 1;
    while (total_error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total_value))) {
        if (n_panels >= spec.max_intervals)
            throw QuadratureError("adaptive quadrature did not converge: error " +
                                  std::to_string(total_error) + " after " +
                                  std::to_string(n_panels) + " panels on [" +
                                  std::to_string(a) + ", " + std::to_string(b) + "]");
        detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b)
            throw QuadratureError("adaptive quadrature hit machine resolution near " +
                                  std::to_string(mid));
        detail::Panel left = detail::gk15(f, worst.a, mid);
        detail::Panel right = detail::gk15(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++n_panels;
    }
    return total_value;
}

/// Integrate f over [a, inf) for f decaying at least like v^-(1+delta).
/// Uses the substitution v = a/t, t in (0,1]; requires a > 0.
template <class F>
double integrate_to_infinity(F&& f, double a, const QuadratureSpec& spec) {
    if (!(a > 0.0)) throw QuadratureError("semi-infinite integral requires a positive lower limit");
    auto transformed = [&f, a](double t) {
        const double v = a / t;
        return f(v) * v / t;  // dv = (a/t^2) dt = (v/t) dt
    };
    return integrate(transformed, 0.0, 1.0, spec);
}

}  // namespace dsr
