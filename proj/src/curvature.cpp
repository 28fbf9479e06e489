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

#include "macaw/estimator.hpp"

#include "macaw/fft.hpp"
#include "macaw/optim.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace macaw
{
    int curvature_lag(int n)
    {
        return int(std::lround(double(n) / 3.0));
    }

    namespace
    {
        struct Range
        {
            double lo, hi;
        };

        struct LineMax
        {
            double value = -1.0;
            long ky = 0, kz = 0; // Unwrapped bins
        };

        // Maximum of |X| along a*fy + b*fz = v inside the rectangle, stepping one bin along the flatter axis
        LineMax scan_line(const Eigen::MatrixXd &mag, double a, double b, double v, const Range &ry, const Range &rz)
        {
            const double ly = double(mag.rows()), lz = double(mag.cols());
            auto at = [&](long ky, long kz) {
                const long ry_ = ((ky % long(ly)) + long(ly)) % long(ly);
                const long rz_ = ((kz % long(lz)) + long(lz)) % long(lz);
                return mag(ry_, rz_);
            };
            LineMax best;
            if (std::abs(a) * lz <= std::abs(b) * ly)
            {
                for (long ky = long(std::ceil(ry.lo * ly)); ky <= long(std::floor(ry.hi * ly)); ++ky)
                {
                    const double fz = (v - a * double(ky) / ly) / b;
                    if (fz < rz.lo || fz > rz.hi)
                        continue;
                    const long kz = std::lround(fz * lz);
                    if (const double m = at(ky, kz); m > best.value)
                        best = {m, ky, kz};
                }
            }
            else
            {
                for (long kz = long(std::ceil(rz.lo * lz)); kz <= long(std::floor(rz.hi * lz)); ++kz)
                {
                    const double fy = (v - b * double(kz) / lz) / a;
                    if (fy < ry.lo || fy > ry.hi)
                        continue;
                    const long ky = std::lround(fy * ly);
                    if (const double m = at(ky, kz); m > best.value)
                        best = {m, ky, kz};
                }
            }
            return best;
        }

        Vec2d refine_peak(const Eigen::MatrixXd &mag, const LineMax &p)
        {
            const long ly = long(mag.rows()), lz = long(mag.cols());
            auto at = [&](long ky, long kz) { return mag(((ky % ly) + ly) % ly, ((kz % lz) + lz) % lz); };
            const double c = at(p.ky, p.kz);
            const double oy = parabolic_offset(at(p.ky - 1, p.kz), c, at(p.ky + 1, p.kz));
            const double oz = parabolic_offset(at(p.ky, p.kz - 1), c, at(p.ky, p.kz + 1));
            return {(double(p.ky) + oy) / double(ly), (double(p.kz) + oz) / double(lz)};
        }
    }

    CurvatureEstimate estimate_curvature(const CMatrix &h_unvec, const EstimatorConfig &cfg, const Upa &upa, double wavelength)
    {
        const int ny = int(h_unvec.rows()), nz = int(h_unvec.cols());
        if (ny < 6 || nz < 6)
            throw Error(Errc::invalid_argument, "estimate_curvature needs at least 6 elements per axis");
        const double q = upa.d_ant * upa.d_ant / (wavelength * cfg.r_min);
        if (!std::isfinite(q) || !(q > 0))
            throw Error(Errc::feasible_region_empty, "estimate_curvature: curvature bound is not positive");

        CurvatureEstimate est;
        const int dy = curvature_lag(ny), dz = curvature_lag(nz);
        est.lag_y = dy;
        est.lag_z = dz;
        const int sy = ny - dy, sz = nz - dz;

        const CMatrix psi1 = h_unvec.topLeftCorner(sy, sz).conjugate().cwiseProduct(h_unvec.bottomRightCorner(sy, sz));
        const CMatrix psi2 = h_unvec.topRightCorner(sy, sz).conjugate().cwiseProduct(h_unvec.bottomLeftCorner(sy, sz));
        const Eigen::Index ly = fft::next_pow2(Eigen::Index(cfg.fft_zero_pad) * sy);
        const Eigen::Index lz = fft::next_pow2(Eigen::Index(cfg.fft_zero_pad) * sz);
        const Eigen::MatrixXd mag1 = fft::fft2(psi1, ly, lz).cwiseAbs();
        const Eigen::MatrixXd mag2 = fft::fft2(psi2, ly, lz).cwiseAbs();

        // Frequency ranges allowed by 0 <= Q <= q I, padded by one bin
        const double fy_bin = 1.0 / double(ly), fz_bin = 1.0 / double(lz);
        const double dn = std::hypot(double(dy), double(dz));
        const Range ry{-0.5 * q * (dy + dn) - fy_bin, 0.5 * q * (dn - dy) + fy_bin};
        const Range rz1{-0.5 * q * (dz + dn) - fz_bin, 0.5 * q * (dn - dz) + fz_bin};
        const Range rz2{0.5 * q * (dz - dn) - fz_bin, 0.5 * q * (dz + dn) + fz_bin};

        const double v_step = double(std::min(dy, dz)) / double(std::max(ly, lz));
        const double v_lo = -q * dy * dy - v_step, v_hi = q * dz * dz + v_step;

        LineMax best1, best2;
        double best_score = -1.0, best_v = 0.0;
        for (double v = v_lo; v <= v_hi + 0.5 * v_step; v += v_step)
        {
            const LineMax l1 = scan_line(mag1, dy, -dz, v, ry, rz1);
            const LineMax l2 = scan_line(mag2, dy, dz, v, ry, rz2);
            if (l1.value < 0.0 || l2.value < 0.0)
                continue;
            const double score = std::min(l1.value, l2.value);
            if (score > best_score)
            {
                best_score = score;
                best_v = v;
                best1 = l1;
                best2 = l2;
            }
        }
        if (best_score < 0.0)
            throw Error(Errc::feasible_region_empty, "estimate_curvature: no admissible intercept");

        const Vec2d f1 = refine_peak(mag1, best1), f2 = refine_peak(mag2, best2);
        est.f1y = f1(0);
        est.f1z = f1(1);
        est.f2y = f2(0);
        est.f2z = f2(1);
        est.intercept = best_v;
        est.score = best_score;

        Mat2d qh;
        qh(0, 0) = -(est.f1y + est.f2y) / (2.0 * dy);
        qh(1, 1) = (est.f2z - est.f1z) / (2.0 * dz);
        qh(0, 1) = qh(1, 0) = 0.5 * ((est.f2y - est.f1y) / (2.0 * dz) - (est.f1z + est.f2z) / (2.0 * dy));

        // Clip the eigenvalues back into the admissible band
        const double slack = 1.0 / (double(std::min(ly, lz)) * double(std::min(dy, dz)));
        Eigen::SelfAdjointEigenSolver<Mat2d> eig;
        eig.computeDirect(qh);
        const Vec2d lam = eig.eigenvalues().cwiseMax(-slack).cwiseMin(q + slack);
        if (lam != eig.eigenvalues())
            qh = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
        est.q_bar = qh;
        return est;
    }
}
