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
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hs {

/// Uniform sampling of the truncated line [-L, L].
///
/// n_points is kept a power of two so every downstream FFT path works on the
/// same grid, while the spacing h = 2L/(n_points - 1) places samples on both
/// endpoints.
struct Grid {
    double half_width = 0.0;
    int n_points = 0;
    double spacing = 0.0;

    static Grid make(double half_width, int n_points) {
        if (!(half_width > 0.0) || !std::isfinite(half_width))
            throw std::invalid_argument("Grid: half_width must be positive and finite");
        if (n_points < 16)
            throw std::invalid_argument("Grid: n_points must be at least 16");
        if ((n_points & (n_points - 1)) != 0)
            throw std::invalid_argument("Grid: n_points must be a power of two");
        Grid g;
        g.half_width = half_width;
        g.n_points = n_points;
        g.spacing = 2.0 * half_width / static_cast<double>(n_points - 1);
        return g;
    }

    double point(int i) const { return -half_width + spacing * static_cast<double>(i); }

    std::vector<double> points() const {
        std::vector<double> x(static_cast<std::size_t>(n_points));
        for (int i = 0; i < n_points; ++i) x[static_cast<std::size_t>(i)] = point(i);
        return x;
    }

    bool operator==(const Grid& other) const {
        return half_width == other.half_width && n_points == other.n_points;
    }
};

/// Asymptotic behaviour of a sampled function, used to decide whether the
/// truncation of integrals to [-L, L] is valid.
enum class DecayClass {
    compactly_supported,
    gaussian_decay,
    bounded_nondecaying,
};

inline const char* to_string(DecayClass d) {
    switch (d) {
        case DecayClass::compactly_supported: return "compactly_supported";
        case DecayClass::gaussian_decay: return "gaussian_decay";
        case DecayClass::bounded_nondecaying: return "bounded_nondecaying";
    }
    return "?";
}

namespace detail {
constexpr double decay_boundary_factor = 1e-10;

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}
}  // namespace detail

/// Classify decay by inspecting the boundary samples: anything whose boundary
/// magnitude is below 1e-10 of the peak counts as decaying.
inline DecayClass infer_decay(std::span<const double> values) {
    const double m = detail::max_abs(values);
    if (m == 0.0) return DecayClass::compactly_supported;
    const double edge = std::max(std::abs(values.front()), std::abs(values.back()));
    if (edge <= detail::decay_boundary_factor * m) return DecayClass::gaussian_decay;
    return DecayClass::bounded_nondecaying;
}

/// Samples of a real function on a Grid plus decay metadata.
///
/// Values are immutable after construction in the sense that every operation
/// returns a fresh LineFunction; nothing here mutates shared state, so values
/// can be shared freely across threads.
struct LineFunction {
    Grid grid;
    std::vector<double> values;
    DecayClass decay_class = DecayClass::bounded_nondecaying;

    static LineFunction make(const Grid& grid, std::vector<double> values, DecayClass decay) {
        if (static_cast<int>(values.size()) != grid.n_points)
            throw std::invalid_argument("LineFunction: value count does not match grid");
        double m = 0.0;
        for (double v : values) {
            if (!std::isfinite(v))
                throw std::runtime_error("LineFunction: non-finite sample (NaN policy: hard error)");
            m = std::max(m, std::abs(v));
        }
        if (decay != DecayClass::bounded_nondecaying && m > 0.0) {
            const double edge = std::max(std::abs(values.front()), std::abs(values.back()));
            if (edge > detail::decay_boundary_factor * m)
                throw std::invalid_argument(
                    "LineFunction: boundary samples too large for decay class " +
                    std::string(to_string(decay)) + " (domain truncation inadequate)");
        }
        LineFunction f;
        f.grid = grid;
        f.values = std::move(values);
        f.decay_class = decay;
        return f;
    }

    static LineFunction zero(const Grid& grid) {
        return make(grid, std::vector<double>(static_cast<std::size_t>(grid.n_points), 0.0),
                    DecayClass::compactly_supported);
    }

    template <typename F>
    static LineFunction sample(const Grid& grid, F&& f, DecayClass decay) {
        std::vector<double> v(static_cast<std::size_t>(grid.n_points));
        for (int i = 0; i < grid.n_points; ++i) v[static_cast<std::size_t>(i)] = f(grid.point(i));
        return make(grid, std::move(v), decay);
    }

    /// Construct with the decay class inferred from the boundary samples.
    static LineFunction make_inferred(const Grid& grid, std::vector<double> values) {
        DecayClass d = infer_decay(values);
        return make(grid, std::move(values), d);
    }

    double max_abs() const { return detail::max_abs(values); }
};

/// Spatial derivative: 4th-order central stencil in the interior, 2nd-order
/// one-sided / central closures on the outermost two rows.
inline LineFunction derivative(const LineFunction& f) {
    const int n = f.grid.n_points;
    const double h = f.grid.spacing;
    const auto& v = f.values;
    std::vector<double> d(static_cast<std::size_t>(n));

    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[1] = (v[2] - v[0]) / (2.0 * h);
    for (int i = 2; i < n - 2; ++i) {
        d[static_cast<std::size_t>(i)] =
            (v[static_cast<std::size_t>(i - 2)] - 8.0 * v[static_cast<std::size_t>(i - 1)] +
             8.0 * v[static_cast<std::size_t>(i + 1)] - v[static_cast<std::size_t>(i + 2)]) /
            (12.0 * h);
    }
    d[static_cast<std::size_t>(n - 2)] = (v[static_cast<std::size_t>(n - 1)] - v[static_cast<std::size_t>(n - 3)]) / (2.0 * h);
    d[static_cast<std::size_t>(n - 1)] =
        (3.0 * v[static_cast<std::size_t>(n - 1)] - 4.0 * v[static_cast<std::size_t>(n - 2)] + v[static_cast<std::size_t>(n - 3)]) / (2.0 * h);

    return LineFunction::make_inferred(f.grid, std::move(d));
}

inline LineFunction derivative(const LineFunction& f);

/// Running integral from the left boundary, realizing the operator
/// x -> \int_{-inf}^{x} f(z) dz on data that decay on the left.
///
/// The rule is the trapezoid sum with the Euler-Maclaurin endpoint correction
/// -h^2/12 (f'(x_k) - f'(x_0)), which makes differentiating the result
/// consistent with the integrand to O(h^4); the plain trapezoid's O(h^2) bias
/// would otherwise dominate every cross-check between the exact solver and
/// the brute-force ones. Increments between nonnegative samples are clamped
/// at zero so the running sum stays nondecreasing for f >= 0, exactly; the
/// clamp can only engage where the cell mass is itself O(h^3).
///
/// The output never decays (it tends to the total integral on the right), so
/// it is always tagged bounded_nondecaying.
inline LineFunction cumulative_integral(const LineFunction& f) {
    // Truncating the -inf limit only needs decay on the LEFT; data that
    // plateau on the right (or fields whose structure has advected toward
    // the right boundary) are fine.
    const double peak = f.max_abs();
    if (peak > 0.0 && std::abs(f.values.front()) > detail::decay_boundary_factor * peak)
        throw std::invalid_argument(
            "cumulative_integral: integrand does not decay at the left boundary; "
            "truncating the -inf limit would be invalid");
    const int n = f.grid.n_points;
    const double h = f.grid.spacing;
    const LineFunction df = derivative(f);
    std::vector<double> out(static_cast<std::size_t>(n));
    out[0] = 0.0;
    for (int i = 1; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double fa = f.values[k - 1], fb = f.values[k];
        double inc = 0.5 * h * (fa + fb) - h * h / 12.0 * (df.values[k] - df.values[k - 1]);
        if (fa >= 0.0 && fb >= 0.0 && inc < 0.0) inc = 0.0;
        out[k] = out[k - 1] + inc;
    }
    return LineFunction::make(f.grid, std::move(out), DecayClass::bounded_nondecaying);
}

/// Trapezoid L^p norm over the truncated domain; p = infinity is the max of
/// the samples. p < 1 is rejected.
inline double lp_norm(const LineFunction& f, double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) return f.max_abs();
    const int n = f.grid.n_points;
    const double h = f.grid.spacing;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        acc += w * std::pow(std::abs(f.values[static_cast<std::size_t>(i)]), p);
    }
    acc *= h;
    if (p == 1.0) return acc;
    if (p == 2.0) return std::sqrt(acc);
    return std::pow(acc, 1.0 / p);
}

struct InvertResult {
    std::vector<double> labels;          ///< x with q(x) = target (clamped outside range)
    std::vector<unsigned char> clamped;  ///< 1 where the target fell outside [q(-L), q(L)]
    bool any_clamped = false;
};

/// Piecewise-linear inverse of a strictly increasing sampled map.
///
/// Rejects non-monotone input: for flow maps that signals a post-blow-up
/// state where q(t, .) stopped being a diffeomorphism.
inline InvertResult monotone_invert(const LineFunction& q_values, std::span<const double> targets) {
    const int n = q_values.grid.n_points;
    const auto& q = q_values.values;
    for (int i = 0; i + 1 < n; ++i) {
        if (!(q[static_cast<std::size_t>(i + 1)] > q[static_cast<std::size_t>(i)]))
            throw std::domain_error(
                "monotone_invert: input is not strictly increasing (flow map no longer a "
                "diffeomorphism; post-blow-up state?)");
    }
    InvertResult res;
    res.labels.resize(targets.size());
    res.clamped.assign(targets.size(), 0);
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const double y = targets[k];
        if (y <= q.front()) {
            res.labels[k] = q_values.grid.point(0);
            if (y < q.front()) { res.clamped[k] = 1; res.any_clamped = true; }
            continue;
        }
        if (y >= q.back()) {
            res.labels[k] = q_values.grid.point(n - 1);
            if (y > q.back()) { res.clamped[k] = 1; res.any_clamped = true; }
            continue;
        }
        const auto it = std::upper_bound(q.begin(), q.end(), y);
        const int j = static_cast<int>(it - q.begin()) - 1;  // q[j] <= y < q[j+1]
        const double t = (y - q[static_cast<std::size_t>(j)]) /
                         (q[static_cast<std::size_t>(j + 1)] - q[static_cast<std::size_t>(j)]);
        res.labels[k] = q_values.grid.point(j) + t * q_values.grid.spacing;
    }
    return res;
}

/// Resample onto another grid, extending by the boundary values outside the
/// source domain (the right extension is what plateau data need).
inline LineFunction resample_constant_extension(const LineFunction& f, const Grid& target);

namespace detail {

/// Evaluate a sampled function at an off-grid point by 4-point Lagrange
/// interpolation (degrades to the boundary cells' lower order at the edges).
inline double interp_cubic(const Grid& g, std::span<const double> v, double x) {
    const int n = g.n_points;
    double s = (x + g.half_width) / g.spacing;
    s = std::clamp(s, 0.0, static_cast<double>(n - 1));
    int i1 = static_cast<int>(std::floor(s));
    i1 = std::clamp(i1, 1, n - 3);
    const double t = s - static_cast<double>(i1);
    const double vm = v[static_cast<std::size_t>(i1 - 1)];
    const double v0 = v[static_cast<std::size_t>(i1)];
    const double v1 = v[static_cast<std::size_t>(i1 + 1)];
    const double v2 = v[static_cast<std::size_t>(i1 + 2)];
    // Lagrange basis on nodes {-1, 0, 1, 2}
    const double a = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double b = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double c = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double d = (t + 1.0) * t * (t - 1.0) / 6.0;
    return a * vm + b * v0 + c * v1 + d * v2;
}

inline double trapezoid_sum(std::span<const double> v, double h) {
    if (v.size() < 2) return 0.0;
    double acc = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) acc += v[i];
    return acc * h;
}

}  // namespace detail

inline LineFunction resample_constant_extension(const LineFunction& f, const Grid& target) {
    std::vector<double> v(static_cast<std::size_t>(target.n_points));
    for (int i = 0; i < target.n_points; ++i) {
        const double x = target.point(i);
        if (x <= -f.grid.half_width)
            v[static_cast<std::size_t>(i)] = f.values.front();
        else if (x >= f.grid.half_width)
            v[static_cast<std::size_t>(i)] = f.values.back();
        else
            v[static_cast<std::size_t>(i)] = detail::interp_cubic(f.grid, f.values, x);
    }
    return LineFunction::make_inferred(target, std::move(v));
}

}  // namespace hs
