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
#include <numbers>
#include <stdexcept>
#include <string>

#include "hs/grid.hpp"

namespace hs::datum {

/// u0(x) = amplitude * int_{-inf}^x e^{-z^2} dz, the standard globally
/// existing datum: u0x = amplitude * e^{-x^2} >= 0, with the inflection of
/// u0x at x = 0. Tends to amplitude*sqrt(pi) on the right, so it does not
/// decay.
inline LineFunction gauss_antiderivative(const Grid& grid, double amplitude = 1.0) {
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    return LineFunction::sample(
        grid,
        [&](double x) { return amplitude * 0.5 * sqrt_pi * (1.0 + std::erf(x)); },
        DecayClass::bounded_nondecaying);
}

/// u0(x) = -amplitude * x e^{-x^2}, the standard blow-up datum: min u0x =
/// -amplitude at x = 0, so T* = 2/amplitude.
inline LineFunction neg_x_gaussian(const Grid& grid, double amplitude = 1.0) {
    return LineFunction::sample(
        grid, [&](double x) { return -amplitude * x * std::exp(-x * x); },
        DecayClass::gaussian_decay);
}

/// Narrow Gaussian bump, handy as a transported tracer.
inline LineFunction bump(const Grid& grid, double center = 0.0, double width = 0.5,
                         double amplitude = 1.0) {
    if (!(width > 0.0)) throw std::invalid_argument("bump: width must be positive");
    return LineFunction::sample(
        grid,
        [&](double x) {
            const double z = (x - center) / width;
            return amplitude * std::exp(-z * z);
        },
        DecayClass::gaussian_decay);
}

inline LineFunction plain_gaussian(const Grid& grid, double amplitude = 1.0) {
    return LineFunction::sample(grid, [&](double x) { return amplitude * std::exp(-x * x); },
                                DecayClass::gaussian_decay);
}

/// Named lookup used by the CLI config.
inline LineFunction by_name(const std::string& name, const Grid& grid, double amplitude) {
    if (name == "zero") return LineFunction::zero(grid);
    if (name == "gauss_anti") return gauss_antiderivative(grid, amplitude);
    if (name == "neg_x_gauss") return neg_x_gaussian(grid, amplitude);
    if (name == "gaussian") return plain_gaussian(grid, amplitude);
    if (name == "bump") return bump(grid, 0.0, 0.5, amplitude);
    throw std::invalid_argument("unknown datum '" + name + "'");
}

}  // namespace hs::datum
