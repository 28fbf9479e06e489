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

#ifndef MACAW_CHANNEL_MODEL_HPP
#define MACAW_CHANNEL_MODEL_HPP

#include "macaw/common.hpp"
#include "macaw/geometry_optics.hpp"

#include <cmath>
#include <span>

namespace macaw
{
    // Pilot comb of M subcarriers spanning B around the carrier f
    struct OfdmConfig
    {
        double carrier_f = 15e9;  // [Hz]
        double bandwidth = 100e6; // [Hz]
        int n_subcarriers = 128;

        double spacing() const { return bandwidth / n_subcarriers; }
        double wavelength() const { return kSpeedOfLight / carrier_f; }
        double epsilon() const { return spacing() / carrier_f; } // Relative subcarrier step
        double delta(int m) const { return centered_index<double>(m, n_subcarriers); }

        void validate() const
        {
            if (!(carrier_f > 0) || !(bandwidth > 0) || n_subcarriers < 1)
                throw Error(Errc::invalid_argument, "OFDM config needs positive f, B and M");
        }
    };

    // Spatial phase psi(n) = k^T n + n^T Q n / 2 [cycles], vectorised with n_y fastest
    template <typename Scalar>
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> spatial_phase(const Vec2<Scalar> &k_bar, const Mat2<Scalar> &q_bar, int n_y, int n_z)
    {
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> psi(Eigen::Index(n_y) * n_z);
        const Scalar qyz = Scalar(0.5) * (q_bar(0, 1) + q_bar(1, 0));
        for (int iz = 0; iz < n_z; ++iz)
        {
            const Scalar dz = centered_index<Scalar>(iz, n_z);
            for (int iy = 0; iy < n_y; ++iy)
            {
                const Scalar dy = centered_index<Scalar>(iy, n_y);
                psi(Eigen::Index(iz) * n_y + iy) = k_bar(0) * dy + k_bar(1) * dz +
                                                   Scalar(0.5) * (q_bar(0, 0) * dy * dy + q_bar(1, 1) * dz * dz) + qyz * dy * dz;
            }
        }
        return psi;
    }

    // exp(-j 2 pi t) with the integer part of t removed first
    template <typename Scalar>
    std::complex<Scalar> cispi2(Scalar t)
    {
        using std::floor;
        t -= floor(t);
        return std::polar(Scalar(1), Scalar(-2) * Scalar(kPi) * t);
    }

    // Unit-norm steering matrix (n_y x n_z) of an anisotropic wavefront
    template <typename Scalar>
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
    awc_steering(const Vec2<Scalar> &k_bar, const Mat2<Scalar> &q_bar, int n_y, int n_z)
    {
        using std::sqrt;
        const auto psi = spatial_phase(k_bar, q_bar, n_y, n_z);
        const Scalar norm = Scalar(1) / sqrt(Scalar(n_y) * Scalar(n_z));
        Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> c(n_y, n_z);
        for (Eigen::Index i = 0; i < psi.size(); ++i)
            c.data()[i] = norm * cispi2(psi(i));
        return c;
    }

    // Spherical-wave steering matrix from direction of travel k_los and source distance r_los
    inline CMatrix swc_steering(const Vec3d &k_los, double r_los, const Upa &upa, double wavelength)
    {
        if (!(r_los > 0))
            throw Error(Errc::invalid_argument, "swc_steering needs a positive distance");
        const double norm = 1.0 / std::sqrt(double(upa.n_elements()));
        CMatrix b(upa.n_y, upa.n_z);
        for (int iz = 0; iz < upa.n_z; ++iz)
            for (int iy = 0; iy < upa.n_y; ++iy)
            {
                const Vec3d p = upa.element_position(iy, iz) - upa.center;
                const double kp = k_los.dot(p);
                const double path = kp + (p.squaredNorm() - kp * kp) / (2.0 * r_los);
                b(iy, iz) = norm * cispi2(path / wavelength);
            }
        return b;
    }

    inline CVector vec(const CMatrix &c)
    {
        return Eigen::Map<const CVector>(c.data(), c.size());
    }

    inline CMatrix unvec(const CVector &v, int n_y, int n_z)
    {
        if (v.size() != Eigen::Index(n_y) * n_z)
            throw Error(Errc::shape_mismatch, "unvec: length does not match the array shape");
        return Eigen::Map<const CMatrix>(v.data(), n_y, n_z);
    }

    // Single-path wideband channel (N x M) with exact beam split:
    // column m = alpha / sqrt(N) * exp(-j 2 pi (1 + eps delta_m)(s_bar + psi(n)))
    inline CMatrix wideband_path(const PathParams &params, const OfdmConfig &ofdm, int n_y, int n_z)
    {
        const Eigen::VectorXd psi = spatial_phase(params.k_bar, params.q_bar, n_y, n_z);
        const double eps = ofdm.epsilon();
        const cdouble scale = params.alpha / std::sqrt(double(n_y) * double(n_z));
        // s_bar is thousands of cycles; dropping its integer part first keeps the phase exact to ~1e-14
        const double s_frac = params.s_bar - std::floor(params.s_bar);
        CMatrix h(psi.size(), ofdm.n_subcarriers);
        for (int m = 0; m < ofdm.n_subcarriers; ++m)
        {
            const double e = eps * ofdm.delta(m);
            for (Eigen::Index n = 0; n < psi.size(); ++n)
                h(n, m) = scale * cispi2(s_frac + psi(n) + e * (params.s_bar + psi(n)));
        }
        return h;
    }

    inline CMatrix synth_channel(std::span<const PathParams> paths, const OfdmConfig &ofdm, const Upa &upa)
    {
        if (paths.empty())
            throw Error(Errc::empty_path, "synth_channel needs at least one path");
        CMatrix h = CMatrix::Zero(Eigen::Index(upa.n_elements()), ofdm.n_subcarriers);
        for (const auto &p : paths)
            h += wideband_path(p, ofdm, upa.n_y, upa.n_z);
        return h;
    }

    inline double nmse(const CMatrix &estimate, const CMatrix &truth)
    {
        if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
            throw Error(Errc::shape_mismatch, "nmse: shapes differ");
        const double ref = truth.squaredNorm();
        if (!(ref > 0))
            throw Error(Errc::zero_reference, "nmse: reference channel is zero");
        return (estimate - truth).squaredNorm() / ref;
    }
}

#endif
