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
#include <vector>

#include "hs/grid.hpp"

namespace hs {

/// Forcing modes for the integral-form equation. A constant c adds c*t to u
/// along every characteristic (and c*t^2/2 to the flow positions) without
/// touching u_x, q_x or the blow-up time. The closure mode g = C*int u_x^2 dz
/// is a time constant under conservation and reduces to the constant mode
/// with c = 2*C*F(+L).
enum class GModeKind { zero, constant, closure };

struct GMode {
    GModeKind kind = GModeKind::zero;
    double value = 0.0;  ///< c for constant, C for closure

    static GMode zero() { return GMode{GModeKind::zero, 0.0}; }
    static GMode constant(double c) { return GMode{GModeKind::constant, c}; }
    static GMode closure(double big_c) { return GMode{GModeKind::closure, big_c}; }
};

/// A snapshot becomes invalid once min(1 + (t/2) u0x) drops to this floor;
/// evaluating the closed form closer to T* would run into catastrophic
/// cancellation.
constexpr double delta_blowup = 1e-6;

/// Per-label data from which the exact solution is reconstructed at any time:
/// labels x, u0(x), u0x(x) and the cumulative energy F(x) = int_{-inf}^x
/// (1/2) u0x^2.
struct CharacteristicState {
    Grid grid;
    LineFunction u0;
    LineFunction u0x;
    LineFunction cumulative_energy;  ///< F, nondecreasing
    GMode g_mode;
    double min_slope = 0.0;
    int min_slope_index = 0;
    double forcing_constant = 0.0;  ///< effective c (0 / c / 2*C*F(+L))
};

inline CharacteristicState init_state(const LineFunction& u0, GMode g_mode = GMode::zero()) {
    CharacteristicState st;
    st.grid = u0.grid;
    st.u0 = u0;
    st.u0x = derivative(u0);
    LineFunction half_sq = LineFunction::make_inferred(st.grid, [&] {
        std::vector<double> v(st.u0x.values.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * st.u0x.values[i] * st.u0x.values[i];
        return v;
    }());
    st.cumulative_energy = cumulative_integral(half_sq);
    st.min_slope = st.u0x.values[0];
    st.min_slope_index = 0;
    for (int i = 1; i < st.grid.n_points; ++i) {
        if (st.u0x.values[static_cast<std::size_t>(i)] < st.min_slope) {
            st.min_slope = st.u0x.values[static_cast<std::size_t>(i)];
            st.min_slope_index = i;
        }
    }
    // The true minimizer generically falls between nodes; a parabola through
    // the bracketing samples recovers it to O(h^4), which the blow-up-time
    // formula needs.
    if (st.min_slope_index > 0 && st.min_slope_index < st.grid.n_points - 1) {
        const std::size_t i = static_cast<std::size_t>(st.min_slope_index);
        const double wl = st.u0x.values[i - 1], wc = st.u0x.values[i], wr = st.u0x.values[i + 1];
        const double curve = wl - 2.0 * wc + wr;
        if (curve > 0.0) {
            const double refined = wc - (wr - wl) * (wr - wl) / (8.0 * curve);
            st.min_slope = std::min(st.min_slope, refined);
        }
    }
    switch (g_mode.kind) {
        case GModeKind::zero: st.forcing_constant = 0.0; break;
        case GModeKind::constant: st.forcing_constant = g_mode.value; break;
        case GModeKind::closure:
            st.forcing_constant = 2.0 * g_mode.value * st.cumulative_energy.values.back();
            break;
    }
    st.g_mode = g_mode;
    return st;
}

/// First time any characteristic slope diverges: -2 / min u0x, or +inf when
/// no slope is negative. Slopes within roundoff of zero (one-sided stencils
/// on a plateau produce -1e-16-ish values) count as nonnegative.
inline double blowup_time(const CharacteristicState& st) {
    const double floor = -1e-12 * std::max(1.0, st.u0x.max_abs());
    if (st.min_slope >= floor) return std::numeric_limits<double>::infinity();
    return -2.0 / st.min_slope;
}

namespace detail {
inline int nearest_label_index(const Grid& g, double x_label) {
    const double s = (x_label + g.half_width) / g.spacing;
    const int i = static_cast<int>(std::lround(s));
    if (i < 0 || i >= g.n_points || std::abs(s - static_cast<double>(i)) > 0.5 + 1e-9)
        throw std::invalid_argument("riccati_ux: label is not a grid node");
    return i;
}
}  // namespace detail

/// Slope along the characteristic through the label nearest x_label:
/// u_x(t, q(t,x)) = u0x / (1 + (t/2) u0x), the solution of w' = -w^2/2.
/// At or past blow-up this returns a signed infinity, never NaN.
inline double riccati_ux(const CharacteristicState& st, double x_label, double t) {
    const int i = detail::nearest_label_index(st.grid, x_label);
    const double w0 = st.u0x.values[static_cast<std::size_t>(i)];
    if (w0 == 0.0) return 0.0;
    const double denom = 1.0 + 0.5 * t * w0;
    if (denom <= delta_blowup)
        return std::copysign(std::numeric_limits<double>::infinity(), w0);
    return w0 / denom;
}

/// Evaluated flow state at a fixed time: q, q_x, and u, u_x along the
/// characteristics. Past blow-up the snapshot is returned with valid = false
/// and the diverging slopes clamped at the delta_blowup floor so the arrays
/// stay finite.
struct LagrangianSnapshot {
    double t = 0.0;
    LineFunction q;
    LineFunction qx;
    LineFunction ux_along;
    LineFunction u_along;
    bool valid = true;
};

/// Closed-form integration of q_t = u(t, q): because u_x^2 q_x is conserved
/// along flows, the source seen by each characteristic is the constant F(x),
/// so q is quadratic in t and u linear:
///   q(t,x) = x + t u0 + (t^2/2)(F + c),  u(t,q(t,x)) = u0 + t (F + c).
inline LagrangianSnapshot snapshot(const CharacteristicState& st, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("snapshot: t must be nonnegative");
    const int n = st.grid.n_points;
    std::vector<double> q(static_cast<std::size_t>(n)), qx(static_cast<std::size_t>(n)),
        w(static_cast<std::size_t>(n)), u(static_cast<std::size_t>(n));
    const double c = st.forcing_constant;
    bool valid = true;
    for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double x = st.grid.point(i);
        const double u0 = st.u0.values[k];
        const double w0 = st.u0x.values[k];
        const double F = st.cumulative_energy.values[k];
        q[k] = x + t * u0 + 0.5 * t * t * (F + c);
        double denom = 1.0 + 0.5 * t * w0;
        if (denom <= delta_blowup) {
            valid = false;
            denom = delta_blowup;
        }
        qx[k] = denom * denom;
        w[k] = w0 / denom;
        u[k] = u0 + t * (F + c);
    }
    LagrangianSnapshot snap;
    snap.t = t;
    snap.valid = valid;
    snap.q = LineFunction::make(st.grid, std::move(q), DecayClass::bounded_nondecaying);
    snap.qx = LineFunction::make(st.grid, std::move(qx), DecayClass::bounded_nondecaying);
    snap.ux_along = LineFunction::make_inferred(st.grid, std::move(w));
    snap.u_along = LineFunction::make(st.grid, std::move(u), DecayClass::bounded_nondecaying);
    return snap;
}

/// Label-space quadrature of u_x^2 q_x, which equals ||u0x||_{L^2}^2 for every
/// valid snapshot (the Lagrangian form of H^1 conservation).
inline double h1_energy(const LagrangianSnapshot& snap) {
    const int n = snap.q.grid.n_points;
    std::vector<double> integrand(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        integrand[k] = snap.ux_along.values[k] * snap.ux_along.values[k] * snap.qx.values[k];
    }
    return detail::trapezoid_sum(integrand, snap.q.grid.spacing);
}

struct EulerianFields {
    LineFunction u;
    LineFunction ux;
    /// sup |derivative(u) - ux| over the interior, a cheap internal
    /// consistency diagnostic of the resampling.
    double consistency_sup = 0.0;
    bool any_clamped = false;
};

namespace detail {

/// Monotonicity-safe cubic interpolation of (q_i, y_i) pairs at target points
/// inside [q_front, q_back]. Node slopes come from 3rd-order finite
/// differences on the nonuniform q spacing, clamped so the interpolant stays
/// inside the local data range (the clamp sits idle in smooth regions, so
/// 4th-order accuracy is kept there).
class MonotoneCubic {
  public:
    MonotoneCubic(std::span<const double> q, std::span<const double> y) : q_(q), y_(y) {
        const std::size_t n = q.size();
        m_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double slope;
            if (i == 0) {
                slope = (y[1] - y[0]) / (q[1] - q[0]);
            } else if (i + 1 == n) {
                slope = (y[n - 1] - y[n - 2]) / (q[n - 1] - q[n - 2]);
            } else {
                const double hl = q[i] - q[i - 1];
                const double hr = q[i + 1] - q[i];
                // 3-point nonuniform first derivative
                slope = (y[i + 1] * hl * hl - y[i - 1] * hr * hr + y[i] * (hr * hr - hl * hl)) /
                        (hl * hr * (hl + hr));
                const double dl = (y[i] - y[i - 1]) / hl;
                const double dr = (y[i + 1] - y[i]) / hr;
                const double lo = 3.0 * std::min({dl, dr, 0.0});
                const double hi = 3.0 * std::max({dl, dr, 0.0});
                slope = std::clamp(slope, lo, hi);
            }
            m_[i] = slope;
        }
    }

    double operator()(double x, std::size_t cell) const {
        const std::size_t i = std::min(cell, q_.size() - 2);
        const double h = q_[i + 1] - q_[i];
        const double t = (x - q_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        const double h10 = t3 - 2.0 * t2 + t;
        const double h01 = -2.0 * t3 + 3.0 * t2;
        const double h11 = t3 - t2;
        return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
    }

  private:
    std::span<const double> q_;
    std::span<const double> y_;
    std::vector<double> m_;
};

}  // namespace detail

/// Resample a valid snapshot onto an Eulerian grid: invert the flow map at
/// the target points, then interpolate u and u_x as functions of q.
inline EulerianFields to_eulerian(const LagrangianSnapshot& snap, const Grid& target) {
    if (!snap.valid)
        throw std::domain_error("to_eulerian: snapshot is past blow-up (flow map not invertible)");
    const auto targets = target.points();
    const InvertResult inv = monotone_invert(snap.q, targets);

    detail::MonotoneCubic interp_u(snap.q.values, snap.u_along.values);
    detail::MonotoneCubic interp_w(snap.q.values, snap.ux_along.values);

    const auto& q = snap.q.values;
    std::vector<double> u(targets.size()), w(targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
        double y = std::clamp(targets[k], q.front(), q.back());
        // cell index from the piecewise-linear inverse
        const double s = (inv.labels[k] + snap.q.grid.half_width) / snap.q.grid.spacing;
        std::size_t cell = static_cast<std::size_t>(std::clamp(
            static_cast<int>(std::floor(s)), 0, snap.q.grid.n_points - 2));
        if (q[cell] > y && cell > 0) --cell;
        if (cell + 1 < q.size() && q[cell + 1] < y) ++cell;
        u[k] = interp_u(y, cell);
        w[k] = interp_w(y, cell);
    }
    EulerianFields out;
    out.any_clamped = inv.any_clamped;
    out.u = LineFunction::make_inferred(target, std::move(u));
    out.ux = LineFunction::make_inferred(target, std::move(w));

    LineFunction du = derivative(out.u);
    double sup = 0.0;
    for (int i = 2; i < target.n_points - 2; ++i)
        sup = std::max(sup, std::abs(du.values[static_cast<std::size_t>(i)] -
                                     out.ux.values[static_cast<std::size_t>(i)]));
    out.consistency_sup = sup;
    // While the flow is well resolved (q_x bounded away from 0) a gross
    // mismatch can only be a resampling bug; close to blow-up the slope field
    // legitimately outruns what the target grid can differentiate.
    double qx_min = snap.qx.values.front();
    for (double v : snap.qx.values) qx_min = std::min(qx_min, v);
    const double scale = std::max(1.0, out.ux.max_abs());
    if (qx_min > 0.1 && sup > 0.05 * scale)
        throw std::runtime_error("to_eulerian: resampled u and u_x are mutually inconsistent");
    return out;
}

}  // namespace hs
