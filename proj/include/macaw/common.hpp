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

#ifndef MACAW_COMMON_HPP
#define MACAW_COMMON_HPP

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace macaw
{
    inline constexpr double kSpeedOfLight = 299792458.0; // [m/s]
    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

    template <typename Scalar>
    using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
    template <typename Scalar>
    using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
    template <typename Scalar>
    using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

    using Vec2d = Vec2<double>;
    using Vec3d = Vec3<double>;
    using Mat2d = Mat2<double>;

    using cdouble = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd; // Column-major, antennas x subcarriers for channels
    using CVector = Eigen::VectorXcd;

    // Failure categories surfaced by the library
    enum class Errc
    {
        grazing_incidence,
        singular_projection,
        caustic_crossing,
        empty_path,
        inconsistent_geometry,
        zero_reference,
        too_many_rows,
        shape_mismatch,
        model_order_too_high,
        feasible_region_empty,
        non_finite,
        sampling_exhausted,
        no_solution,
        invalid_argument,
    };

    inline const char *to_string(Errc code)
    {
        switch (code)
        {
        case Errc::grazing_incidence: return "GrazingIncidence";
        case Errc::singular_projection: return "SingularProjection";
        case Errc::caustic_crossing: return "CausticCrossing";
        case Errc::empty_path: return "EmptyPath";
        case Errc::inconsistent_geometry: return "InconsistentGeometry";
        case Errc::zero_reference: return "ZeroReference";
        case Errc::too_many_rows: return "TooManyRows";
        case Errc::shape_mismatch: return "ShapeMismatch";
        case Errc::model_order_too_high: return "ModelOrderTooHigh";
        case Errc::feasible_region_empty: return "FeasibleRegionEmpty";
        case Errc::non_finite: return "NonFinite";
        case Errc::sampling_exhausted: return "SamplingExhausted";
        case Errc::no_solution: return "NoSolution";
        case Errc::invalid_argument: return "InvalidArgument";
        }
        return "Unknown";
    }

    class Error : public std::runtime_error
    {
    public:
        Error(Errc code, const std::string &what)
            : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

        Errc code() const noexcept { return code_; }

    private:
        Errc code_;
    };

    // Centered element offset for a 0-based index i on an axis of n elements,
    // i.e. (i + 1) - (n + 1) / 2
    template <typename Scalar = double>
    constexpr Scalar centered_index(int i, int n)
    {
        return Scalar(i) - Scalar(n - 1) / Scalar(2);
    }
}

#endif
