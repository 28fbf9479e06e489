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

#ifndef MACAW_GEOMETRY_OPTICS_HPP
#define MACAW_GEOMETRY_OPTICS_HPP

#include "macaw/common.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace macaw
{
    // Uniform planar array. Element (iy, iz) sits at center + d_ant*(dy*row_dir + dz*col_dir)
    // with dy, dz the centered indices.
    template <typename Scalar = double>
    struct UpaConfig
    {
        int n_y = 128;
        int n_z = 128;
        Scalar d_ant = Scalar(0.01);
        Vec3<Scalar> center = Vec3<Scalar>::Zero();
        Vec3<Scalar> row_dir = Vec3<Scalar>::UnitY();
        Vec3<Scalar> col_dir = Vec3<Scalar>::UnitZ();

        int n_elements() const { return n_y * n_z; }
        Vec3<Scalar> normal() const { return row_dir.cross(col_dir); }

        // Diagonal length D of the aperture
        Scalar diagonal() const
        {
            using std::sqrt;
            const Scalar a = Scalar(n_y - 1), b = Scalar(n_z - 1);
            return d_ant * sqrt(a * a + b * b);
        }

        // Near-field boundary 0.5*sqrt(D^3/lambda)
        Scalar near_field_radius(Scalar wavelength) const
        {
            using std::sqrt;
            const Scalar D = diagonal();
            return Scalar(0.5) * sqrt(D * D * D / wavelength);
        }

        Scalar rayleigh_distance(Scalar wavelength) const
        {
            const Scalar D = diagonal();
            return Scalar(2) * D * D / wavelength;
        }

        Vec3<Scalar> element_position(int iy, int iz) const
        {
            return center + d_ant * (centered_index<Scalar>(iy, n_y) * row_dir + centered_index<Scalar>(iz, n_z) * col_dir);
        }

        void validate() const
        {
            using std::abs;
            if (n_y < 1 || n_z < 1 || !(d_ant > Scalar(0)))
                throw Error(Errc::invalid_argument, "UPA needs positive dimensions and spacing");
            if (abs(row_dir.norm() - Scalar(1)) > Scalar(1e-9) || abs(col_dir.norm() - Scalar(1)) > Scalar(1e-9))
                throw Error(Errc::invalid_argument, "UPA axis directions must be unit vectors");
            if (abs(row_dir.dot(col_dir)) > Scalar(1e-9))
                throw Error(Errc::invalid_argument, "UPA row and column directions must be orthogonal");
        }
    };

    // Array with row_dir = y and col_dir tilted down by `downtilt` radians about y
    template <typename Scalar = double>
    UpaConfig<Scalar> make_downtilted_upa(int n_y, int n_z, Scalar d_ant, const Vec3<Scalar> &center, Scalar downtilt)
    {
        using std::cos;
        using std::sin;
        UpaConfig<Scalar> upa;
        upa.n_y = n_y;
        upa.n_z = n_z;
        upa.d_ant = d_ant;
        upa.center = center;
        upa.row_dir = Vec3<Scalar>(0, 1, 0);
        upa.col_dir = Vec3<Scalar>(sin(downtilt), 0, cos(downtilt));
        return upa;
    }

    // Local wavefront: direction, tangent basis (x1, x2), curvature in that basis [1/m]
    template <typename Scalar = double>
    struct WavefrontState
    {
        Vec3<Scalar> direction = Vec3<Scalar>::UnitX();
        Vec3<Scalar> x1 = Vec3<Scalar>::UnitY();
        Vec3<Scalar> x2 = Vec3<Scalar>::UnitZ();
        Mat2<Scalar> curvature = Mat2<Scalar>::Zero();
        Scalar eikonal = Scalar(0); // Accumulated path length [m]
        Scalar amp_i = Scalar(1);   // 1/s_i of the first segment
        Scalar amp_r = Scalar(1);   // Spreading factor accumulated after the first bounce

        Scalar amplitude() const { return amp_i * amp_r; }
    };

    // Reflector described by principal directions and non-negative principal curvatures [1/m]
    template <typename Scalar = double>
    struct SurfacePatch
    {
        Vec3<Scalar> point = Vec3<Scalar>::Zero();
        Vec3<Scalar> normal = Vec3<Scalar>::UnitZ();
        Vec3<Scalar> u1 = Vec3<Scalar>::UnitX();
        Vec3<Scalar> u2 = Vec3<Scalar>::UnitY();
        Scalar kappa1 = Scalar(0);
        Scalar kappa2 = Scalar(0);
    };

    template <typename Scalar = double>
    struct PathGeometry
    {
        Vec3<Scalar> ue_pos = Vec3<Scalar>::Zero();
        std::vector<SurfacePatch<Scalar>> bounces;
        Scalar reflection_loss = Scalar(0);  // Power loss fraction per path, in [0, 1]
        Scalar reflection_phase = Scalar(0); // [rad]
        bool los = false;                    // Direct path (only used when bounces is empty)
    };

    // Discrete-index-domain parameters of one path
    template <typename Scalar = double>
    struct EffectivePathParams
    {
        Vec2<Scalar> k_bar = Vec2<Scalar>::Zero(); // [cycles/index]
        Mat2<Scalar> q_bar = Mat2<Scalar>::Zero(); // [cycles/index^2]
        Scalar s_bar = Scalar(0);                  // Reference eikonal [wavelengths]
        std::complex<Scalar> alpha = Scalar(1);
    };

    using Upa = UpaConfig<double>;
    using Wavefront = WavefrontState<double>;
    using Surface = SurfacePatch<double>;
    using Path = PathGeometry<double>;
    using PathParams = EffectivePathParams<double>;

    template <typename Scalar>
    std::pair<Vec3<Scalar>, Vec3<Scalar>> make_tangent_basis(const Vec3<Scalar> &direction)
    {
        using std::abs;
        Vec3<Scalar> up = Vec3<Scalar>::UnitZ();
        if (abs(direction.dot(up)) > Scalar(0.99))
            up = Vec3<Scalar>::UnitX();
        Vec3<Scalar> b1 = (up - up.dot(direction) * direction).normalized();
        Vec3<Scalar> b2 = direction.cross(b1).normalized();
        return {b1, b2};
    }

    template <typename Scalar>
    Vec3<Scalar> reflect_direction(const Vec3<Scalar> &k_in, const Vec3<Scalar> &normal)
    {
        return k_in - Scalar(2) * k_in.dot(normal) * normal;
    }

    // Removes round-off asymmetry
    template <typename Scalar>
    Mat2<Scalar> symmetrize(const Mat2<Scalar> &m)
    {
        return Scalar(0.5) * (m + m.transpose());
    }

    // Reflection of a wavefront off a curved surface. `max_incidence` is the grazing cutoff [rad].
    template <typename Scalar>
    WavefrontState<Scalar> reflect_wavefront(const WavefrontState<Scalar> &incident, const SurfacePatch<Scalar> &surface,
                                             Scalar max_incidence = Scalar(80.0 * kPi / 180.0))
    {
        using std::abs;
        using std::cos;
        const Vec3<Scalar> &k = incident.direction;
        const Vec3<Scalar> &n = surface.normal;
        const Scalar cos_theta = abs(k.dot(n));
        if (cos_theta < cos(max_incidence))
            throw Error(Errc::grazing_incidence, "incidence angle exceeds the grazing cutoff");

        Mat2<Scalar> theta;
        theta << incident.x1.dot(surface.u1), incident.x1.dot(surface.u2),
            incident.x2.dot(surface.u1), incident.x2.dot(surface.u2);
        if (abs(theta.determinant()) <= Scalar(1e-6))
            throw Error(Errc::singular_projection, "incident basis projects degenerately onto the surface");

        const Mat2<Scalar> theta_inv = theta.inverse();
        const Mat2<Scalar> q_s = Vec2<Scalar>(surface.kappa1, surface.kappa2).asDiagonal();

        WavefrontState<Scalar> out = incident;
        out.direction = reflect_direction(k, n);
        out.x1 = reflect_direction(incident.x1, n);
        out.x2 = reflect_direction(incident.x2, n);
        out.curvature = symmetrize<Scalar>(incident.curvature + Scalar(2) * cos_theta * theta_inv.transpose() * q_s * theta_inv);
        return out;
    }

    // Free-space propagation over s metres; principal curvatures map q -> q / (1 + s q)
    template <typename Scalar>
    WavefrontState<Scalar> propagate_wavefront(const WavefrontState<Scalar> &w, Scalar s)
    {
        using std::sqrt;
        if (!(s > Scalar(0)))
            throw Error(Errc::invalid_argument, "propagation distance must be positive");

        Eigen::SelfAdjointEigenSolver<Mat2<Scalar>> es;
        es.computeDirect(w.curvature);
        Vec2<Scalar> q = es.eigenvalues();
        Scalar spread = Scalar(1);
        for (int m = 0; m < 2; ++m)
        {
            const Scalar den = Scalar(1) + s * q(m);
            if (!(den > Scalar(0)))
                throw Error(Errc::caustic_crossing, "wavefront passes through a focal line");
            q(m) /= den;
            spread /= sqrt(den);
        }
        const Mat2<Scalar> &v = es.eigenvectors();

        WavefrontState<Scalar> out = w;
        out.curvature = symmetrize<Scalar>(v * q.asDiagonal() * v.transpose());
        out.eikonal += s;
        out.amp_r *= spread;
        return out;
    }

    struct TraceOptions
    {
        double max_incidence = 80.0 * kPi / 180.0;
        double wavelength = 0.0;                          // Enables the near-field source check when > 0
        std::function<void(const std::string &)> warning; // Receives validation warnings
    };

    // Trace UE -> bounces -> array center. The source is a point at the UE, so the first
    // incident curvature is I/s_i.
    template <typename Scalar>
    WavefrontState<Scalar> trace_path(const PathGeometry<Scalar> &path, const UpaConfig<Scalar> &upa,
                                      const TraceOptions &opt = {})
    {
        using std::sqrt;
        const Vec3<Scalar> first = path.bounces.empty() ? upa.center : path.bounces.front().point;
        if (path.bounces.empty() && !path.los)
            throw Error(Errc::empty_path, "reflected path without bounces");

        const Vec3<Scalar> seg0 = first - path.ue_pos;
        const Scalar s_i = seg0.norm();
        if (!(s_i > Scalar(0)))
            throw Error(Errc::inconsistent_geometry, "UE coincides with the first path vertex");

        if (opt.warning && opt.wavelength > 0 && !path.bounces.empty())
        {
            const Scalar r_nf = upa.near_field_radius(Scalar(opt.wavelength));
            if (s_i < r_nf)
                opt.warning("UE-to-first-bounce distance " + std::to_string(double(s_i)) +
                            " m is inside the near-field radius; point-source paraboloid approximation is weak");
        }

        WavefrontState<Scalar> w;
        w.direction = seg0 / s_i;
        std::tie(w.x1, w.x2) = make_tangent_basis<Scalar>(w.direction);
        w.curvature = Mat2<Scalar>::Identity() / s_i;
        w.eikonal = s_i;
        w.amp_i = Scalar(1) / s_i;
        w.amp_r = Scalar(1);

        for (std::size_t b = 0; b < path.bounces.size(); ++b)
        {
            w = reflect_wavefront(w, path.bounces[b], Scalar(opt.max_incidence));
            const Vec3<Scalar> next = b + 1 < path.bounces.size() ? path.bounces[b + 1].point : upa.center;
            const Vec3<Scalar> seg = next - path.bounces[b].point;
            const Scalar len = seg.norm();
            if (!(len > Scalar(0)) || w.direction.dot(seg / len) < Scalar(1) - Scalar(1e-6))
                throw Error(Errc::inconsistent_geometry, "reflected direction does not point at the next vertex");
            w = propagate_wavefront(w, len);
        }
        return w;
    }

    // 2x2 projection of the tangent basis onto the array axes
    template <typename Scalar>
    Mat2<Scalar> projection_matrix(const WavefrontState<Scalar> &w, const UpaConfig<Scalar> &upa)
    {
        Mat2<Scalar> p;
        p << w.x1.dot(upa.row_dir), w.x1.dot(upa.col_dir),
            w.x2.dot(upa.row_dir), w.x2.dot(upa.col_dir);
        return p;
    }

    // Effective direction and curvature in the array index domain. s_bar and alpha are left untouched.
    template <typename Scalar>
    EffectivePathParams<Scalar> effective_params(const WavefrontState<Scalar> &w, const UpaConfig<Scalar> &upa, Scalar wavelength)
    {
        EffectivePathParams<Scalar> out;
        const Scalar scale = upa.d_ant / wavelength;
        out.k_bar = scale * Vec2<Scalar>(w.direction.dot(upa.row_dir), w.direction.dot(upa.col_dir));
        const Mat2<Scalar> p = projection_matrix(w, upa);
        out.q_bar = symmetrize<Scalar>(scale * upa.d_ant * p.transpose() * w.curvature * p);
        out.s_bar = w.eikonal / wavelength;
        return out;
    }

    // Curvature-based Rayleigh criterion: planar when the largest principal curvature <= lambda/(2 D^2)
    template <typename Scalar>
    bool is_plane_wave(const WavefrontState<Scalar> &w, const UpaConfig<Scalar> &upa, Scalar wavelength)
    {
        Eigen::SelfAdjointEigenSolver<Mat2<Scalar>> es;
        es.computeDirect(w.curvature, Eigen::EigenvaluesOnly);
        const Scalar D = upa.diagonal();
        return es.eigenvalues().maxCoeff() <= wavelength / (Scalar(2) * D * D);
    }
}

#endif
