/*
 hslab - a numerical laboratory for the Hunter-Saxton equation on the line.
 Copyright 2026 the hslab authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hs/grid.hpp"
#include "hs/littlewood_paley.hpp"

namespace hs {

/// A field stored at uniformly spaced time slices over [0, T]. 33 slices with
/// cubic interpolation in time is the coarsest storage that does not visibly
/// degrade the contraction of the iteration.
struct SlicedField {
    double T = 0.0;
    std::vector<LineFunction> slices;

    int n_slices() const { return static_cast<int>(slices.size()); }
    double dt() const { return T / static_cast<double>(n_slices() - 1); }

    static SlicedField constant_in_time(const LineFunction& f, double T, int n_slices) {
        SlicedField s;
        s.T = T;
        s.slices.assign(static_cast<std::size_t>(n_slices), f);
        return s;
    }

    /// Evaluate at (t, x) with 4-point Lagrange interpolation in both time
    /// and space.
    double eval(double t, double x) const {
        const int S = n_slices();
        const double step = dt();
        double s = std::clamp(t / step, 0.0, static_cast<double>(S - 1));
        int m = static_cast<int>(std::floor(s));
        m = std::clamp(m, 1, S - 3);
        const double tau = s - static_cast<double>(m);
        const double vm = detail::interp_cubic(slices[0].grid, slices[static_cast<std::size_t>(m - 1)].values, x);
        const double v0 = detail::interp_cubic(slices[0].grid, slices[static_cast<std::size_t>(m)].values, x);
        const double v1 = detail::interp_cubic(slices[0].grid, slices[static_cast<std::size_t>(m + 1)].values, x);
        const double v2 = detail::interp_cubic(slices[0].grid, slices[static_cast<std::size_t>(m + 2)].values, x);
        const double a = -tau * (tau - 1.0) * (tau - 2.0) / 6.0;
        const double b = (tau + 1.0) * (tau - 1.0) * (tau - 2.0) / 2.0;
        const double c = -(tau + 1.0) * tau * (tau - 2.0) / 2.0;
        const double d = (tau + 1.0) * tau * (tau - 1.0) / 6.0;
        return a * vm + b * v0 + c * v1 + d * v2;
    }
};

constexpr int picard_default_slices = 33;

struct TransportResult {
    SlicedField states;
    bool boundary_contaminated = false;
};

/// Solve the frozen-coefficient linear transport problem f_t + v f_x = g,
/// f(0) = f0, by backward characteristic tracing: RK4 on dx/dt = v(t, x)
/// from each output node down to t = 0, accumulating the source along the
/// traced path. With v = 0 this reduces to direct time integration of g.
inline TransportResult transport_step(const SlicedField& advect, const SlicedField& source,
                                      const LineFunction& f0, double T,
                                      int n_slices = picard_default_slices) {
    if (advect.n_slices() < 4 || source.n_slices() < 4)
        throw std::invalid_argument("transport_step: coefficient fields need at least 4 slices");
    if (!(T > 0.0)) throw std::invalid_argument("transport_step: T must be positive");

    const Grid& grid = f0.grid;
    const double L = grid.half_width;
    TransportResult result;
    result.states.T = T;
    result.states.slices.reserve(static_cast<std::size_t>(n_slices));
    result.states.slices.push_back(f0);

    const double slice_dt = T / static_cast<double>(n_slices - 1);
    const int substeps_per_slice = 2;

    for (int k = 1; k < n_slices; ++k) {
        const double t_k = slice_dt * static_cast<double>(k);
        const int steps = substeps_per_slice * k;
        const double dtau = t_k / static_cast<double>(steps);
        std::vector<double> out(static_cast<std::size_t>(grid.n_points));

        for (int i = 0; i < grid.n_points; ++i) {
            double y = grid.point(i);
            double acc = 0.0;  // accumulates int_0^{t_k} g(s, y(s)) ds
            double s = t_k;
            for (int step = 0; step < steps; ++step) {
                // RK4 on d/ds (y, acc) = (v(s, y), g(s, y)) with negative step
                const double hstep = -dtau;
                const double k1y = advect.eval(s, y);
                const double k1a = source.eval(s, y);
                const double k2y = advect.eval(s + 0.5 * hstep, y + 0.5 * hstep * k1y);
                const double k2a = source.eval(s + 0.5 * hstep, y + 0.5 * hstep * k1y);
                const double k3y = advect.eval(s + 0.5 * hstep, y + 0.5 * hstep * k2y);
                const double k3a = source.eval(s + 0.5 * hstep, y + 0.5 * hstep * k2y);
                const double k4y = advect.eval(s + hstep, y + hstep * k3y);
                const double k4a = source.eval(s + hstep, y + hstep * k3y);
                y += hstep / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
                acc += -hstep / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
                s += hstep;
                if (y < -L || y > L) {
                    result.boundary_contaminated = true;
                    y = std::clamp(y, -L, L);
                }
            }
            out[static_cast<std::size_t>(i)] = detail::interp_cubic(grid, f0.values, y) + acc;
        }
        result.states.slices.push_back(LineFunction::make_inferred(grid, std::move(out)));
    }
    return result;
}

/// Record of one Picard run: iterates at the probe time, their E-norms, the
/// successive differences in the probe norm, and the horizon actually used.
struct IterationLedger {
    double T_iter = 0.0;
    bool contracted = true;
    std::string failure;

    std::vector<LineFunction> probe_iterates;  ///< u^n at t = T, n = 0..N
    std::vector<double> e_norms;               ///< E^2_{2,2} norm of u^n(T)
    std::vector<double> diffs;                 ///< ||u^{n+1} - u^n|| at probe time
    std::vector<double> diffs_time_sup;        ///< same, sup over a 5-point time sample
    std::vector<double> diff_ratios;           ///< diffs[n] / diffs[n-1]
    std::vector<double> source_bound_ratios;   ///< E(G^n) / E(u^n)^2

    SlicedField last_trajectory;  ///< full trajectory of the final iterate
    SlicedField prev_trajectory;  ///< and of the one before it
};

/// Probe norm ||.||_inf + ||d/dx .||_{L^2} of Step 3 of the iteration proof.
inline double probe_norm(const LineFunction& f) {
    return lp_norm(f, std::numeric_limits<double>::infinity()) + lp_norm(derivative(f), 2.0);
}

namespace detail {

inline LineFunction field_difference(const LineFunction& a, const LineFunction& b) {
    std::vector<double> d(a.values.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.values[i] - b.values[i];
    return LineFunction::make_inferred(a.grid, std::move(d));
}

inline SlicedField source_of(const SlicedField& u) {
    SlicedField g;
    g.T = u.T;
    g.slices.reserve(u.slices.size());
    for (const auto& slice : u.slices) {
        LineFunction ux = derivative(slice);
        std::vector<double> half_sq(ux.values.size());
        for (std::size_t i = 0; i < half_sq.size(); ++i)
            half_sq[i] = 0.5 * ux.values[i] * ux.values[i];
        g.slices.push_back(cumulative_integral(LineFunction::make_inferred(slice.grid, std::move(half_sq))));
    }
    return g;
}

}  // namespace detail

/// Run the iteration u^0 = 0, u^{n+1} = transport(u^n, G^n, u0) over [0, T].
///
/// If the probe differences grow for 3 consecutive iterations the horizon is
/// halved and the run restarts; below T = 1e-3 the scheme is reported as
/// failed rather than shrunk further.
inline IterationLedger run_iteration(const LineFunction& u0, int n_iter, double T,
                                     const DyadicFilterBank& bank,
                                     int n_slices = picard_default_slices) {
    if (n_iter < 1) throw std::invalid_argument("run_iteration: need at least one iteration");
    const ESpaceParams e_params = ESpaceParams::make(2.0, 2.0, 2.0);

    double horizon = T;
    while (true) {
        IterationLedger ledger;
        ledger.T_iter = horizon;

        SlicedField current = SlicedField::constant_in_time(LineFunction::zero(u0.grid), horizon, n_slices);
        ledger.probe_iterates.push_back(current.slices.back());
        ledger.e_norms.push_back(0.0);

        const std::vector<double> sample_fracs{0.2, 0.4, 0.6, 0.8, 1.0};
        int consecutive_growth = 0;
        bool restart = false;

        for (int n = 0; n < n_iter; ++n) {
            SlicedField g = detail::source_of(current);
            const double e_cur = ledger.e_norms.back();
            if (e_cur > 0.0) {
                const double e_g = e_space_norm(bank, g.slices.back(), e_params);
                ledger.source_bound_ratios.push_back(e_g / (e_cur * e_cur));
            }
            TransportResult next = transport_step(current, g, u0, horizon, n_slices);

            const LineFunction& probe_prev = current.slices.back();
            const LineFunction& probe_next = next.states.slices.back();
            const double d = probe_norm(detail::field_difference(probe_next, probe_prev));

            double d_sup = 0.0;
            for (double frac : sample_fracs) {
                const int idx = static_cast<int>(std::lround(frac * (n_slices - 1)));
                d_sup = std::max(d_sup, probe_norm(detail::field_difference(
                                            next.states.slices[static_cast<std::size_t>(idx)],
                                            current.slices[static_cast<std::size_t>(idx)])));
            }

            ledger.diffs.push_back(d);
            ledger.diffs_time_sup.push_back(d_sup);
            if (ledger.diffs.size() >= 2) {
                const double prev = ledger.diffs[ledger.diffs.size() - 2];
                ledger.diff_ratios.push_back(prev > 0.0 ? d / prev : 0.0);
                // growth only counts above the roundoff floor; converged
                // differences wobble at machine noise
                const double floor = 1e-12 * std::max(1.0, ledger.diffs.front());
                consecutive_growth = (d > prev && d > floor) ? consecutive_growth + 1 : 0;
                if (consecutive_growth >= 3) {
                    restart = true;
                    break;
                }
            }

            ledger.e_norms.push_back(e_space_norm(bank, probe_next, e_params));
            ledger.probe_iterates.push_back(probe_next);
            ledger.prev_trajectory = std::move(current);
            current = std::move(next.states);
        }

        if (!restart) {
            ledger.last_trajectory = std::move(current);
            return ledger;
        }
        horizon *= 0.5;
        if (horizon < 1e-3) {
            IterationLedger failed;
            failed.T_iter = horizon;
            failed.contracted = false;
            failed.failure = "non-contractive even after shrinking the horizon below 1e-3";
            return failed;
        }
    }
}

}  // namespace hs
