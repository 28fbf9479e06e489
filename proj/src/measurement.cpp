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

#include "macaw/measurement.hpp"

#include "macaw/fft.hpp"
#include "macaw/random.hpp"

#include <cmath>
#include <numeric>

namespace macaw
{
    SketchOperator SketchOperator::make_srft(Eigen::Index n, Eigen::Index n_rows, std::uint64_t seed, Eigen::Index block_size)
    {
        if (n < 1 || n_rows < 1)
            throw Error(Errc::invalid_argument, "make_srft needs positive dimensions");
        if (n_rows > n)
            throw Error(Errc::too_many_rows, "make_srft: more rows requested than the ambient dimension");
        if (block_size <= 0)
            block_size = n_rows;
        if (n_rows % block_size != 0)
            throw Error(Errc::invalid_argument, "make_srft: row count is not a multiple of the block size");

        SketchOperator op;
        op.n_ = n;
        op.block_size_ = block_size;
        op.seed_ = seed;

        Rng phase_rng(derive_seed(seed, 0));
        op.phases_.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
            op.phases_(i) = phase_rng.unit_phasor();

        // Partial Fisher-Yates: the first n_rows entries are a uniform sample without replacement
        Rng row_rng(derive_seed(seed, 1));
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), Eigen::Index(0));
        for (Eigen::Index i = 0; i < n_rows; ++i)
        {
            const auto j = i + Eigen::Index(row_rng.index(std::uint64_t(n - i)));
            std::swap(perm[std::size_t(i)], perm[std::size_t(j)]);
        }
        op.rows_.assign(perm.begin(), perm.begin() + n_rows);
        return op;
    }

    CVector SketchOperator::apply(const CVector &x) const
    {
        if (x.size() != n_)
            throw Error(Errc::shape_mismatch, "SketchOperator::apply: input length differs from n");
        const CVector xd = x.cwiseProduct(phases_);
        CVector spec(n_);
        fft::forward({xd.data(), std::size_t(n_)}, {spec.data(), std::size_t(n_)});
        const double s = 1.0 / std::sqrt(double(n_));
        CVector y(rows());
        for (Eigen::Index r = 0; r < rows(); ++r)
            y(r) = s * spec(rows_[std::size_t(r)]);
        return y;
    }

    CMatrix SketchOperator::apply(const CMatrix &x) const
    {
        if (x.rows() != n_)
            throw Error(Errc::shape_mismatch, "SketchOperator::apply: input rows differ from n");
        CMatrix y(rows(), x.cols());
        for (Eigen::Index c = 0; c < x.cols(); ++c)
            y.col(c) = apply(CVector(x.col(c)));
        return y;
    }

    CVector SketchOperator::apply_adjoint(const CVector &y) const
    {
        if (y.size() != rows())
            throw Error(Errc::shape_mismatch, "SketchOperator::apply_adjoint: input length differs from row count");
        CVector spec = CVector::Zero(n_);
        for (Eigen::Index r = 0; r < rows(); ++r)
            spec(rows_[std::size_t(r)]) = y(r);
        CVector x(n_);
        fft::inverse({spec.data(), std::size_t(n_)}, {x.data(), std::size_t(n_)});
        return (x / std::sqrt(double(n_))).cwiseProduct(phases_.conjugate());
    }

    CMatrix SketchOperator::apply_adjoint(const CMatrix &y) const
    {
        if (y.rows() != rows())
            throw Error(Errc::shape_mismatch, "SketchOperator::apply_adjoint: input rows differ from row count");
        CMatrix x(n_, y.cols());
        for (Eigen::Index c = 0; c < y.cols(); ++c)
            x.col(c) = apply_adjoint(CVector(y.col(c)));
        return x;
    }

    SketchOperator SketchOperator::compensated(const CVector &s) const
    {
        if (s.size() != n_)
            throw Error(Errc::shape_mismatch, "SketchOperator::compensated: diagonal length differs from n");
        SketchOperator op = *this;
        op.phases_ = phases_.cwiseProduct(s);
        return op;
    }

    CMatrix SketchOperator::dense() const
    {
        CMatrix w(rows(), n_);
        CVector e = CVector::Zero(n_);
        for (Eigen::Index i = 0; i < n_; ++i)
        {
            e(i) = 1.0;
            w.col(i) = apply(e);
            e(i) = 0.0;
        }
        return w;
    }

    ObservationSet observe(const CMatrix &h, std::shared_ptr<const SketchOperator> op, double snr_db, std::uint64_t seed,
                           SnrReference ref)
    {
        if (!op)
            throw Error(Errc::invalid_argument, "observe: missing measurement operator");
        if (h.rows() != op->n())
            throw Error(Errc::shape_mismatch, "observe: channel rows differ from the operator dimension");

        ObservationSet obs;
        obs.y = op->apply(h);
        obs.snr_db = snr_db;
        obs.seed = seed;
        obs.op = op;
        if (std::isinf(snr_db) && snr_db > 0)
            return obs;
        if (std::isnan(snr_db))
            throw Error(Errc::invalid_argument, "observe: SNR is NaN");

        const double snr = std::pow(10.0, snr_db / 10.0);
        const double signal = ref == SnrReference::per_observation
                                  ? obs.y.squaredNorm() / double(obs.y.size())
                                  : h.squaredNorm() / double(h.size());
        const double var = signal / snr;
        obs.sigma_n = std::sqrt(var);

        Rng rng(derive_seed(seed, 7));
        for (Eigen::Index c = 0; c < obs.y.cols(); ++c)
            for (Eigen::Index r = 0; r < obs.y.rows(); ++r)
                obs.y(r, c) += rng.complex_normal(var);
        return obs;
    }
}
