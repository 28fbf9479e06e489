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

#ifndef MACAW_MEASUREMENT_HPP
#define MACAW_MEASUREMENT_HPP

#include "macaw/common.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

namespace macaw
{
    // Subsampled randomized Fourier transform W = S F D with unitary F.
    // Rows are grouped into consecutive blocks of `block_size` (one per pilot symbol).
    class SketchOperator
    {
    public:
        static SketchOperator make_srft(Eigen::Index n, Eigen::Index n_rows, std::uint64_t seed, Eigen::Index block_size = 0);

        Eigen::Index n() const { return n_; }
        Eigen::Index rows() const { return Eigen::Index(rows_.size()); }
        Eigen::Index block_size() const { return block_size_; }
        std::uint64_t seed() const { return seed_; }
        const std::vector<Eigen::Index> &row_indices() const { return rows_; }
        const CVector &phases() const { return phases_; }

        CVector apply(const CVector &x) const;
        CMatrix apply(const CMatrix &x) const; // Column-wise
        CVector apply_adjoint(const CVector &y) const;
        CMatrix apply_adjoint(const CMatrix &y) const;

        // W diag(s) for a unit-modulus s; still an SRFT
        SketchOperator compensated(const CVector &s) const;

        // Materialised W (rows x n), for tests and small problems
        CMatrix dense() const;

    private:
        Eigen::Index n_ = 0;
        Eigen::Index block_size_ = 0;
        std::uint64_t seed_ = 0;
        std::vector<Eigen::Index> rows_;
        CVector phases_;
    };

    enum class SnrReference
    {
        per_observation, // ||WH||^2 / (R M sigma^2)
        per_antenna,     // ||H||^2 / (N M sigma^2)
    };

    struct ObservationSet
    {
        CMatrix y; // R x M
        double sigma_n = 0.0;
        double snr_db = std::numeric_limits<double>::infinity();
        std::uint64_t seed = 0;
        std::shared_ptr<const SketchOperator> op;
    };

    // Y = W H + N with N white circular Gaussian. snr_db = +inf gives noiseless data.
    ObservationSet observe(const CMatrix &h, std::shared_ptr<const SketchOperator> op, double snr_db, std::uint64_t seed,
                           SnrReference ref = SnrReference::per_observation);
}

#endif
