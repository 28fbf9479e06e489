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

#ifndef MACAW_TEST_SUPPORT_HPP
#define MACAW_TEST_SUPPORT_HPP

#include "macaw/channel_model.hpp"
#include "macaw/random.hpp"

#include <cmath>

namespace macaw::test
{
    inline CVector random_cvector(Eigen::Index n, Rng &rng)
    {
        CVector v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = rng.complex_normal(1.0);
        return v;
    }

    inline double cos_sim(const CMatrix &a, const CMatrix &b)
    {
        const cdouble ip = (a.array().conjugate() * b.array()).sum();
        return std::abs(ip) / (a.norm() * b.norm());
    }

    // Phase of the plain scalar formula for one element, used as an oracle for the vectorised code
    inline cdouble scalar_steering(const Vec2d &k, const Mat2d &q, int iy, int iz, int n_y, int n_z)
    {
        const double y = iy - (n_y - 1) / 2.0;
        const double z = iz - (n_z - 1) / 2.0;
        const double psi = k(0) * y + k(1) * z + 0.5 * (q(0, 0) * y * y + 2.0 * q(0, 1) * y * z + q(1, 1) * z * z);
        return std::exp(cdouble(0.0, -2.0 * kPi * psi)) / std::sqrt(double(n_y) * n_z);
    }

    inline double rel_err(const CMatrix &a, const CMatrix &b)
    {
        return (a - b).norm() / b.norm();
    }
}

#endif
