// SPDX-License-Identifier: Apache-2.0
//
// macaw: anisotropic-wavefront channel simulation and estimation
// Copyright (C) 2026 The macaw contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MACAW_FFT_HPP
#define MACAW_FFT_HPP

#include "macaw/common.hpp"

#include <cmath>
#include <span>

namespace macaw::fft
{
    // Unnormalised 1D transforms: forward uses e^{-j2pi kn/n}, inverse e^{+j2pi kn/n} without 1/n.
    // `in` and `out` must have equal length and must not alias.
    void forward(std::span<const cdouble> in, std::span<cdouble> out);
    void inverse(std::span<const cdouble> in, std::span<cdouble> out);

    // In-place unnormalised 2D transform over both dimensions of `a`
    void transform2(CMatrix &a, bool inverse);

    // Forward 2D DFT of `x` zero-padded (bottom/right) to rows x cols
    CMatrix fft2(const CMatrix &x, Eigen::Index rows, Eigen::Index cols);

    // Inverse 2D DFT with 1/(rows*cols) scaling
    CMatrix ifft2(const CMatrix &x);

    // Smallest power of two >= n
    Eigen::Index next_pow2(Eigen::Index n);

    struct SpectralPeak
    {
        double magnitude = 0.0;        // |X| at the peak bin
        Vec2d freq = Vec2d::Zero();    // Cycles per sample of the e^{+j2 pi f n} component, in [-1/2, 1/2)
        Eigen::Index row = 0, col = 0; // Peak bin
    };

    // Global peak of |X| for X = fft2(x) padded to the next power of two of pad * size,
    // refined with a per-axis parabola through the neighbouring magnitudes
    SpectralPeak spectral_peak(const CMatrix &x, int pad);

    // Wrap to [-1/2, 1/2)
    inline double wrap_half(double v) { return v - std::floor(v + 0.5); }
}

#endif
