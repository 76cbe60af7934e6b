// Test-only oracles: brute-force integrators and generators kept independent
// of the closed-form solution paths they are used to check.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "hs/fft.hpp"
#include "hs/grid.hpp"

namespace oracle {

/// Classic RK4 for a scalar ODE y' = f(t, y).
inline double scalar_rk4(const std::function<double(double, double)>& f, double y0, double t0,
                         double t1, double dt) {
    double t = t0, y = y0;
    while (t < t1 - 1e-15) {
        const double h = std::min(dt, t1 - t);
        const double k1 = f(t, y);
        const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        const double k4 = f(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    return y;
}

// --- brute-force characteristic system -------------------------------------
//
// Integrates the coupled system q_t = u, u_t = G(t, q) + c with G recomputed
// from the current (q, u) arrays every stage: u_x along characteristics is
// the label-space derivative du/dx divided by dq/dx, and G is the running
// trapezoid of (1/2) u_x^2 dq = (1/2) (du/dx)^2 / (dq/dx) dx. No use is made
// of the Riccati formula, of energy conservation, or of the closed form.

struct CharacteristicOracleResult {
    std::vector<double> times;
    std::vector<std::vector<double>> q;
    std::vector<std::vector<double>> u;
};

namespace detail {

inline void label_derivative(const std::vector<double>& v, double h, std::vector<double>& d) {
    const int n = static_cast<int>(v.size());
    d.resize(v.size());
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[1] = (v[2] - v[0]) / (2.0 * h);
    for (int i = 2; i < n - 2; ++i)
        d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
    d[n - 2] = (v[n - 1] - v[n - 3]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
}

}  // namespace detail

inline CharacteristicOracleResult integrate_characteristics(const hs::LineFunction& u0,
                                                            double forcing_constant,
                                                            const std::vector<double>& capture_times,
                                                            double dt) {
    const int n = u0.grid.n_points;
    const double h = u0.grid.spacing;
    std::vector<double> q = u0.grid.points();
    std::vector<double> u = u0.values;

    std::vector<double> du, dq, integrand, d_integrand;
    auto compute_rhs_u = [&](const std::vector<double>& qv, const std::vector<double>& uv,
                             std::vector<double>& out) {
        detail::label_derivative(uv, h, du);
        detail::label_derivative(qv, h, dq);
        integrand.resize(uv.size());
        for (int i = 0; i < n; ++i) integrand[i] = 0.5 * du[i] * du[i] / dq[i];
        detail::label_derivative(integrand, h, d_integrand);
        out.resize(uv.size());
        // G_i = endpoint-corrected running trapezoid of (1/2) (du/dx)^2 / (dq/dx),
        // the same quadrature rule the library uses
        double acc = 0.0;
        out[0] = forcing_constant;
        for (int i = 1; i < n; ++i) {
            double inc = 0.5 * h * (integrand[i - 1] + integrand[i]) -
                         h * h / 12.0 * (d_integrand[i] - d_integrand[i - 1]);
            if (integrand[i - 1] >= 0.0 && integrand[i] >= 0.0 && inc < 0.0) inc = 0.0;
            acc += inc;
            out[i] = acc + forcing_constant;
        }
    };

    CharacteristicOracleResult result;
    std::vector<double> k1u, k2u, k3u, k4u;
    std::vector<double> q2(n), u2(n), q3(n), u3(n), q4(n), u4(n);
    double t = 0.0;
    std::size_t next_capture = 0;

    auto capture_if_due = [&]() {
        while (next_capture < capture_times.size() &&
               t >= capture_times[next_capture] - 1e-12) {
            result.times.push_back(t);
            result.q.push_back(q);
            result.u.push_back(u);
            ++next_capture;
        }
    };
    capture_if_due();

    const double t_end = capture_times.empty() ? 0.0 : capture_times.back();
    while (t < t_end - 1e-12) {
        double step = dt;
        if (next_capture < capture_times.size())
            step = std::min(step, capture_times[next_capture] - t);
        step = std::min(step, t_end - t);

        compute_rhs_u(q, u, k1u);  // dq/dt = u, du/dt = G + c
        for (int i = 0; i < n; ++i) {
            q2[i] = q[i] + 0.5 * step * u[i];
            u2[i] = u[i] + 0.5 * step * k1u[i];
        }
        compute_rhs_u(q2, u2, k2u);
        for (int i = 0; i < n; ++i) {
            q3[i] = q[i] + 0.5 * step * u2[i];
            u3[i] = u[i] + 0.5 * step * k2u[i];
        }
        compute_rhs_u(q3, u3, k3u);
        for (int i = 0; i < n; ++i) {
            q4[i] = q[i] + step * u3[i];
            u4[i] = u[i] + step * k3u[i];
        }
        compute_rhs_u(q4, u4, k4u);
        for (int i = 0; i < n; ++i) {
            q[i] += step / 6.0 * (u[i] + 2.0 * u2[i] + 2.0 * u3[i] + u4[i]);
            u[i] += step / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
        }
        t += step;
        capture_if_due();
    }
    return result;
}

// --- seeded random band-limited functions ----------------------------------

/// Real function whose spectrum is supported on |xi| in [xi_lo, xi_hi] with
/// iid complex Gaussian bin amplitudes, windowed by a wide super-Gaussian so
/// boundary decay holds on the truncated domain.
inline hs::LineFunction band_limited_random(const hs::Grid& grid, unsigned seed, double xi_lo,
                                            double xi_hi) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto xi = hs::detail::fft_frequencies(grid);
    const std::size_t n = xi.size();
    std::vector<std::complex<double>> spec(n, {0.0, 0.0});
    for (std::size_t k = 1; k < n / 2; ++k) {
        const double a = std::abs(xi[k]);
        if (a < xi_lo || a > xi_hi) continue;
        const std::complex<double> z(gauss(rng), gauss(rng));
        spec[k] = z;
        spec[n - k] = std::conj(z);
    }
    hs::detail::fft_inplace(spec, true);
    std::vector<double> v(n);
    const double Lw = 0.6 * grid.half_width;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = grid.point(static_cast<int>(i)) / Lw;
        const double z4 = z * z * z * z;
        v[i] = spec[i].real() * std::exp(-z4 * z4);
    }
    return hs::LineFunction::make_inferred(grid, std::move(v));
}

}  // namespace oracle
