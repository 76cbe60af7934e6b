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

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hs/fft.hpp"
#include "hs/grid.hpp"

namespace hs {

enum class Homogeneity { homogeneous, inhomogeneous };

struct BesovParams {
    double s = 0.0;
    double p = 2.0;
    double r = 2.0;
    Homogeneity homogeneity = Homogeneity::homogeneous;

    static BesovParams make(double s, double p, double r,
                            Homogeneity hom = Homogeneity::homogeneous) {
        if (!(p >= 1.0) || !(r >= 1.0))
            throw std::invalid_argument("BesovParams: p and r must be >= 1");
        return BesovParams{s, p, r, hom};
    }
};

/// Parameters of the mixed space E^s_{p,r} = L^inf n B^{s-1}_{p,r} n
/// B^{s-2}_{p,r} n W^{1,q} (at s = 2 the Besov pair is (1, 2) and r is tied
/// to p: r = p for p <= 2, r = 2 for p >= 2).
struct ESpaceParams {
    double s = 2.0;
    double p = 2.0;
    double r = 2.0;

    static ESpaceParams make(double s, double p, double r) {
        if (!(p >= 1.0) || !(r >= 1.0))
            throw std::invalid_argument("ESpaceParams: p and r must be >= 1");
        if (!(s >= 2.0))
            throw std::invalid_argument("ESpaceParams: s must be >= 2");
        if (s == 2.0) {
            if (p <= 2.0 && r != p)
                throw std::invalid_argument("ESpaceParams: at s=2 with p<=2, r must equal p");
            if (p > 2.0 && r != 2.0)
                throw std::invalid_argument("ESpaceParams: at s=2 with p>=2, r must equal 2");
        }
        return ESpaceParams{s, p, r};
    }

    /// Hoelder conjugate of p.
    double q() const {
        if (std::isinf(p)) return 1.0;
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        return p / (p - 1.0);
    }
};

/// Dyadic multiplier family realizing the blocks Delta_j on a Grid.
///
/// The mother profiles are built from a C-infinity step: chi equals 1 below
/// anchor*(1-width), 0 above anchor*(1+width), and phi(xi) = chi(xi/2) -
/// chi(xi), so the telescoping partition of unity is exact by construction.
/// The transition is kept narrow (width = 1%) so that discrete Besov norms
/// track their Sobolev counterparts closely; the supports still sit inside
/// the annulus {3/4 <= |xi| <= 8/3}.
struct DyadicFilterBank {
    Grid grid;
    int j_min = 0;
    int j_max = 0;
    double anchor = 0.766;
    double width = 0.01;

    std::vector<double> frequency_grid;  ///< signed FFT frequencies
    std::vector<double> chi_profile;     ///< chi(|xi_k|)
    std::vector<double> phi_profile;     ///< phi(|xi_k|)

    std::vector<std::vector<double>> block_multipliers;  ///< phi(2^-j xi_k), j = j_min..j_max
    std::vector<double> low_residual_multiplier;         ///< chi(2^-j_min xi_k)
    std::vector<double> chi_unit_multiplier;             ///< chi(xi_k)

    double chi(double xi) const {
        const double a = std::abs(xi);
        const double lo = anchor * (1.0 - width);
        const double hi = anchor * (1.0 + width);
        if (a <= lo) return 1.0;
        if (a >= hi) return 0.0;
        return smooth_step((hi - a) / (hi - lo));
    }

    double phi(double xi) const { return chi(0.5 * xi) - chi(xi); }

    int block_count() const { return j_max - j_min + 1; }

    const std::vector<double>& block_multiplier(int j) const {
        if (j < j_min || j > j_max)
            throw std::invalid_argument("DyadicFilterBank: block index out of [j_min, j_max]");
        return block_multipliers[static_cast<std::size_t>(j - j_min)];
    }

    /// Upper end of the band on which the truncated partition of unity is
    /// exactly 1: chi(2^{-j_max-1} xi) = 1 for |xi| below this edge.
    double partition_edge() const {
        return 2.0 * anchor * (1.0 - width) * std::ldexp(1.0, j_max);
    }

    static double smooth_step(double t) {
        // C-infinity ramp: 0 for t<=0, 1 for t>=1.
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        const double e0 = std::exp(-1.0 / t);
        const double e1 = std::exp(-1.0 / (1.0 - t));
        return e0 / (e0 + e1);
    }
};

/// Widest block range a grid supports: j_max touches the Nyquist bound and
/// j_min the fundamental-frequency bound of build_filter_bank.
inline std::pair<int, int> default_block_range(const Grid& grid) {
    const DyadicFilterBank ref;  // for the profile constants
    const double nyquist = detail::nyquist_frequency(grid);
    const double fundamental =
        2.0 * std::numbers::pi / (static_cast<double>(grid.n_points) * grid.spacing);
    const int j_max = static_cast<int>(
        std::floor(std::log2(nyquist / (2.0 * ref.anchor * (1.0 - ref.width)))));
    const int j_min = static_cast<int>(std::ceil(std::log2(fundamental * 3.0 / 8.0)));
    return {j_min, j_max};
}

inline DyadicFilterBank build_filter_bank(const Grid& grid, int j_min, int j_max) {
    if (j_min > j_max)
        throw std::invalid_argument("build_filter_bank: j_min must not exceed j_max");
    DyadicFilterBank bank;
    bank.grid = grid;
    bank.j_min = j_min;
    bank.j_max = j_max;

    const double nyquist = detail::nyquist_frequency(grid);
    const double edge = bank.partition_edge();
    if (edge > nyquist)
        throw std::invalid_argument(
            "build_filter_bank: Nyquist violation, partition edge 2c(1-w)*2^j_max = " +
            std::to_string(edge) + " exceeds pi/h = " + std::to_string(nyquist) +
            "; lower j_max or refine the grid");
    const double fundamental =
        2.0 * std::numbers::pi / (static_cast<double>(grid.n_points) * grid.spacing);
    const double lowest_block_top = (8.0 / 3.0) * std::ldexp(1.0, j_min);
    if (lowest_block_top < fundamental)
        throw std::invalid_argument(
            "build_filter_bank: domain-size violation, block j_min tops out at (8/3)*2^j_min = " +
            std::to_string(lowest_block_top) + " below the fundamental frequency 2pi/(n h) = " +
            std::to_string(fundamental) + "; raise j_min or widen the domain");

    bank.frequency_grid = detail::fft_frequencies(grid);
    const std::size_t n = bank.frequency_grid.size();
    bank.chi_profile.resize(n);
    bank.phi_profile.resize(n);
    bank.chi_unit_multiplier.resize(n);
    bank.low_residual_multiplier.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = bank.frequency_grid[k];
        bank.chi_profile[k] = bank.chi(xi);
        bank.phi_profile[k] = bank.phi(xi);
        bank.chi_unit_multiplier[k] = bank.chi(xi);
        bank.low_residual_multiplier[k] = bank.chi(std::ldexp(xi, -j_min));
    }
    bank.block_multipliers.resize(static_cast<std::size_t>(bank.block_count()));
    for (int j = j_min; j <= j_max; ++j) {
        auto& m = bank.block_multipliers[static_cast<std::size_t>(j - j_min)];
        m.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            m[k] = bank.phi(std::ldexp(bank.frequency_grid[k], -j));
    }
    return bank;
}

namespace detail {

constexpr double imag_residue_tolerance = 1e-10;
constexpr double spectral_tail_energy_tolerance = 1e-12;  // amplitude ratio 1e-6

/// Apply a real multiplier in frequency space and return the real part,
/// asserting the imaginary residue stays negligible.
inline std::vector<double> filtered_real(const std::vector<std::complex<double>>& spectrum,
                                         std::span<const double> multiplier, double scale_hint) {
    std::vector<std::complex<double>> a(spectrum.size());
    for (std::size_t k = 0; k < spectrum.size(); ++k) a[k] = spectrum[k] * multiplier[k];
    fft_inplace(a, true);
    std::vector<double> out(a.size());
    double imag_max = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i].real();
        imag_max = std::max(imag_max, std::abs(a[i].imag()));
    }
    if (imag_max > imag_residue_tolerance * std::max(1.0, scale_hint))
        throw std::runtime_error("dyadic filter: imaginary residue above tolerance");
    return out;
}

/// Spectrum of f suitable for homogeneous block extraction. For decaying f
/// this is just the FFT. For bounded, non-decaying f with a decaying
/// derivative the blocks are recovered from the derivative through the
/// multiplier phi_j(xi)/(i xi); since phi_j vanishes near xi = 0 the division
/// is harmless, and constants (which all Delta_j annihilate) drop out. This
/// avoids the spectral pollution a periodization jump would cause.
struct BlockSpectrum {
    std::vector<std::complex<double>> values;
    bool via_derivative = false;
};

inline BlockSpectrum block_spectrum(const DyadicFilterBank& bank, const LineFunction& f) {
    BlockSpectrum spec;
    if (f.decay_class != DecayClass::bounded_nondecaying) {
        spec.values = fft_of_real(f.values);
        return spec;
    }
    LineFunction df = derivative(f);
    if (df.decay_class == DecayClass::bounded_nondecaying)
        throw std::invalid_argument(
            "besov_norm: function neither decays nor has a decaying derivative; "
            "its truncated dyadic decomposition would be dominated by the periodization jump");
    spec.values = fft_of_real(df.values);
    spec.via_derivative = true;
    const std::complex<double> minus_i(0.0, -1.0);
    for (std::size_t k = 0; k < spec.values.size(); ++k) {
        const double xi = bank.frequency_grid[k];
        spec.values[k] = (xi == 0.0) ? std::complex<double>(0.0, 0.0)
                                     : spec.values[k] * minus_i / xi;
    }
    return spec;
}

inline void assert_spectral_tail(const DyadicFilterBank& bank,
                                 const std::vector<std::complex<double>>& spectrum) {
    const double edge = bank.partition_edge();
    double total = 0.0, tail = 0.0;
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const double e = std::norm(spectrum[k]);
        total += e;
        if (std::abs(bank.frequency_grid[k]) > edge) tail += e;
    }
    if (total == 0.0) return;
    if (tail > spectral_tail_energy_tolerance * total)
        throw std::domain_error(
            "besov_norm: spectral content above the resolvable band (fraction " +
            std::to_string(std::sqrt(tail / total)) +
            " in amplitude); blocks beyond j_max would be dropped silently");
}

inline double aggregate_lr(const std::vector<double>& terms, double r) {
    if (std::isinf(r)) {
        double m = 0.0;
        for (double t : terms) m = std::max(m, t);
        return m;
    }
    double acc = 0.0;
    for (double t : terms) acc += std::pow(t, r);
    return std::pow(acc, 1.0 / r);
}

}  // namespace detail

struct BesovOptions {
    bool enforce_tail = true;  ///< assert no content above the resolvable band
};

/// Frequency-localized piece Delta_j f (FFT, multiply by phi(2^-j .), inverse
/// FFT). Requires decaying input so the periodization error is negligible.
inline LineFunction dyadic_block(const DyadicFilterBank& bank, const LineFunction& f, int j) {
    if (!(f.grid == bank.grid))
        throw std::invalid_argument("dyadic_block: function grid does not match bank grid");
    if (f.decay_class == DecayClass::bounded_nondecaying)
        throw std::invalid_argument("dyadic_block: input must decay (periodization error)");
    if (j < bank.j_min || j > bank.j_max)
        throw std::invalid_argument("dyadic_block: j outside [j_min, j_max]");
    auto spectrum = detail::fft_of_real(f.values);
    auto out = detail::filtered_real(spectrum, bank.block_multiplier(j), f.max_abs());
    return LineFunction::make_inferred(f.grid, std::move(out));
}

/// The low-frequency residual S_{j_min} f that stands in for all blocks below
/// j_min on the truncated grid.
inline LineFunction low_residual(const DyadicFilterBank& bank, const LineFunction& f) {
    if (!(f.grid == bank.grid))
        throw std::invalid_argument("low_residual: function grid does not match bank grid");
    if (f.decay_class == DecayClass::bounded_nondecaying)
        throw std::invalid_argument("low_residual: input must decay (periodization error)");
    auto spectrum = detail::fft_of_real(f.values);
    auto out = detail::filtered_real(spectrum, bank.low_residual_multiplier, f.max_abs());
    return LineFunction::make_inferred(f.grid, std::move(out));
}

/// Discrete Besov norm: l^r aggregation over blocks of 2^{js} ||Delta_j f||_p.
///
/// Homogeneous mode folds everything below j_min into the low-frequency
/// residual (weighted as a block at j_min - 1); inhomogeneous mode replaces
/// blocks j < 0 by the single chi-filtered low part at weight 2^{-s}.
inline double besov_norm(const DyadicFilterBank& bank, const LineFunction& f,
                         const BesovParams& params, const BesovOptions& options = {}) {
    if (!(f.grid == bank.grid))
        throw std::invalid_argument("besov_norm: function grid does not match bank grid");
    if (!(params.p >= 1.0) || !(params.r >= 1.0))
        throw std::invalid_argument("besov_norm: p and r must be >= 1");
    if (f.max_abs() == 0.0) return 0.0;

    auto spec = detail::block_spectrum(bank, f);
    if (options.enforce_tail) detail::assert_spectral_tail(bank, spec.values);
    const double scale = f.max_abs();

    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(bank.block_count()) + 1);

    const int j_lo = (params.homogeneity == Homogeneity::homogeneous) ? bank.j_min : 0;
    for (int j = j_lo; j <= bank.j_max; ++j) {
        auto block = detail::filtered_real(spec.values, bank.block_multiplier(j), scale);
        LineFunction bf{bank.grid, std::move(block), DecayClass::bounded_nondecaying};
        terms.push_back(std::pow(2.0, params.s * j) * lp_norm(bf, params.p));
    }

    if (params.homogeneity == Homogeneity::homogeneous) {
        auto low = detail::filtered_real(spec.values, bank.low_residual_multiplier, scale);
        LineFunction lf{bank.grid, std::move(low), DecayClass::bounded_nondecaying};
        terms.push_back(std::pow(2.0, params.s * (bank.j_min - 1)) * lp_norm(lf, params.p));
    } else {
        if (spec.via_derivative)
            throw std::invalid_argument(
                "besov_norm: inhomogeneous norm of a non-decaying function is not computable "
                "(its chi-filtered low part is not in L^p)");
        auto low = detail::filtered_real(spec.values, bank.chi_unit_multiplier, scale);
        LineFunction lf{bank.grid, std::move(low), DecayClass::bounded_nondecaying};
        terms.push_back(std::pow(2.0, -params.s) * lp_norm(lf, params.p));
    }

    return detail::aggregate_lr(terms, params.r);
}

/// Norm of the mixed space E^s_{p,r}: ||f||_inf + ||f||_{B^{s-1}} +
/// ||f||_{B^{s-2}} (the pair (1, 2) at s = 2) + ||f'||_{L^q}.
inline double e_space_norm(const DyadicFilterBank& bank, const LineFunction& f,
                           const ESpaceParams& params, const BesovOptions& options = {}) {
    const double s_hi = (params.s == 2.0) ? 2.0 : params.s - 1.0;
    const double s_lo = (params.s == 2.0) ? 1.0 : params.s - 2.0;
    const double b_hi = besov_norm(bank, f, BesovParams::make(s_hi, params.p, params.r), options);
    const double b_lo = besov_norm(bank, f, BesovParams::make(s_lo, params.p, params.r), options);
    return lp_norm(f, std::numeric_limits<double>::infinity()) + b_lo + b_hi +
           lp_norm(derivative(f), params.q());
}

inline DyadicFilterBank build_default_bank(const Grid& grid) {
    const auto [j_min, j_max] = default_block_range(grid);
    return build_filter_bank(grid, j_min, j_max);
}

/// Serialized norm record consumed by the experiment drivers.
struct NormRecord {
    double s = 0.0;
    double p = 0.0;
    double r = 0.0;
    Homogeneity homogeneity = Homogeneity::homogeneous;
    double value = 0.0;
};

}  // namespace hs
