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

#ifndef MACAW_OPTIM_HPP
#define MACAW_OPTIM_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace macaw
{
    struct NelderMeadResult
    {
        Eigen::VectorXd x;
        double value = 0.0;
        int iterations = 0;
    };

    // Derivative-free minimisation with the standard reflection/expansion/contraction/shrink
    // coefficients (1, 2, 0.5, 0.5). `step` sets the initial simplex edge per coordinate.
    inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd &)> &f,
                                        const Eigen::VectorXd &x0, const Eigen::VectorXd &step,
                                        int max_iter, double f_tol = 1e-14)
    {
        const Eigen::Index n = x0.size();
        std::vector<Eigen::VectorXd> pts(n + 1, x0);
        std::vector<double> val(n + 1);
        for (Eigen::Index i = 0; i < n; ++i)
            pts[i + 1](i) += step(i);
        for (Eigen::Index i = 0; i <= n; ++i)
            val[i] = f(pts[i]);

        std::vector<Eigen::Index> order(n + 1);
        int it = 0;
        for (; it < max_iter; ++it)
        {
            for (Eigen::Index i = 0; i <= n; ++i)
                order[i] = i;
            std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return val[a] < val[b]; });
            const Eigen::Index best = order.front(), worst = order.back(), second = order[n - 1];
            if (std::abs(val[worst] - val[best]) <= f_tol * (std::abs(val[best]) + f_tol))
                break;

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
            for (Eigen::Index i = 0; i < n; ++i)
                centroid += pts[order[i]];
            centroid /= double(n);

            const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
            const double fr = f(xr);
            if (fr < val[best])
            {
                const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
                const double fe = f(xe);
                if (fe < fr)
                    pts[worst] = xe, val[worst] = fe;
                else
                    pts[worst] = xr, val[worst] = fr;
                continue;
            }
            if (fr < val[second])
            {
                pts[worst] = xr, val[worst] = fr;
                continue;
            }
            const bool outside = fr < val[worst];
            const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                               : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
            const double fc = f(xc);
            if (fc < (outside ? fr : val[worst]))
            {
                pts[worst] = xc, val[worst] = fc;
                continue;
            }
            for (Eigen::Index i = 0; i <= n; ++i)
                if (i != best)
                {
                    pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                    val[i] = f(pts[i]);
                }
        }
        const auto best = std::min_element(val.begin(), val.end()) - val.begin();
        return {pts[best], val[best], it};
    }

    // Vertex offset of the parabola through (-1, a), (0, b), (1, c); 0 when flat or not a maximum
    inline double parabolic_offset(double a, double b, double c)
    {
        const double den = a - 2.0 * b + c;
        if (!(den < 0.0))
            return 0.0;
        return std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
    }
}

#endif
