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
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hs/grid.hpp"

namespace hs::detail {

/// In-place iterative radix-2 FFT. Size must be a power of two (guaranteed by
/// Grid). The inverse applies the 1/n normalization.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }

    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv;
    }
}

inline std::vector<std::complex<double>> fft_of_real(std::span<const double> v) {
    std::vector<std::complex<double>> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::complex<double>(v[i], 0.0);
    fft_inplace(a, false);
    return a;
}

/// Signed FFT frequencies of a Grid in the usual layout: bin k holds
/// 2*pi*k/(n*h) for k < n/2 and the negative frequencies above.
inline std::vector<double> fft_frequencies(const Grid& g) {
    const int n = g.n_points;
    const double period = static_cast<double>(n) * g.spacing;
    const double d_xi = 2.0 * std::numbers::pi / period;
    std::vector<double> xi(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const int ks = (k <= n / 2 - 1) ? k : k - n;
        xi[static_cast<std::size_t>(k)] = d_xi * static_cast<double>(ks);
    }
    return xi;
}

inline double nyquist_frequency(const Grid& g) {
    return std::numbers::pi / g.spacing;
}

}  // namespace hs::detail
