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

#include "macaw/fft.hpp"

#include "macaw/optim.hpp"

#include <unsupported/Eigen/FFT>

#include <vector>

namespace macaw::fft
{
    namespace
    {
        Eigen::FFT<double> &engine()
        {
            // Twiddle tables are cached per length inside the engine
            thread_local Eigen::FFT<double> fft(Eigen::FFT<double>::impl_type(), Eigen::FFT<double>::Unscaled);
            return fft;
        }

        // kissfft faults on length 1, where the transform is the identity anyway
        void run(const cdouble *in, cdouble *out, Eigen::Index n, bool inv)
        {
            if (n == 1)
                out[0] = in[0];
            else if (inv)
                engine().inv(out, in, n);
            else
                engine().fwd(out, in, n);
        }

        void check(std::span<const cdouble> in, std::span<cdouble> out)
        {
            if (in.size() != out.size())
                throw Error(Errc::shape_mismatch, "fft: input and output lengths differ");
        }
    }

    void forward(std::span<const cdouble> in, std::span<cdouble> out)
    {
        check(in, out);
        if (in.empty())
            return;
        run(in.data(), out.data(), Eigen::Index(in.size()), false);
    }

    void inverse(std::span<const cdouble> in, std::span<cdouble> out)
    {
        check(in, out);
        if (in.empty())
            return;
        run(in.data(), out.data(), Eigen::Index(in.size()), true);
    }

    void transform2(CMatrix &a, bool inv)
    {
        const Eigen::Index rows = a.rows(), cols = a.cols();
        if (rows == 0 || cols == 0)
            return;
        std::vector<cdouble> buf(std::max(rows, cols)), tmp(std::max(rows, cols));

        // Columns are contiguous in column-major storage
        for (Eigen::Index c = 0; c < cols; ++c)
        {
            cdouble *col = a.col(c).data();
            std::copy(col, col + rows, buf.begin());
            run(buf.data(), col, rows, inv);
        }
        for (Eigen::Index r = 0; r < rows; ++r)
        {
            for (Eigen::Index c = 0; c < cols; ++c)
                buf[c] = a(r, c);
            run(buf.data(), tmp.data(), cols, inv);
            for (Eigen::Index c = 0; c < cols; ++c)
                a(r, c) = tmp[c];
        }
    }

    CMatrix fft2(const CMatrix &x, Eigen::Index rows, Eigen::Index cols)
    {
        if (rows < x.rows() || cols < x.cols())
            throw Error(Errc::shape_mismatch, "fft2: padded size smaller than input");
        CMatrix a = CMatrix::Zero(rows, cols);
        a.topLeftCorner(x.rows(), x.cols()) = x;
        transform2(a, false);
        return a;
    }

    CMatrix ifft2(const CMatrix &x)
    {
        CMatrix a = x;
        transform2(a, true);
        a /= double(a.size());
        return a;
    }

    Eigen::Index next_pow2(Eigen::Index n)
    {
        Eigen::Index p = 1;
        while (p < n)
            p <<= 1;
        return p;
    }

    SpectralPeak spectral_peak(const CMatrix &x, int pad)
    {
        const Eigen::Index ly = next_pow2(x.rows() * pad), lz = next_pow2(x.cols() * pad);
        const Eigen::MatrixXd mag = fft2(x, ly, lz).cwiseAbs();
        SpectralPeak p;
        p.magnitude = mag.maxCoeff(&p.row, &p.col);
        auto at = [&](Eigen::Index a, Eigen::Index b) { return mag((a + ly) % ly, (b + lz) % lz); };
        const double oy = parabolic_offset(at(p.row - 1, p.col), p.magnitude, at(p.row + 1, p.col));
        const double oz = parabolic_offset(at(p.row, p.col - 1), p.magnitude, at(p.row, p.col + 1));
        p.freq = Vec2d(wrap_half((double(p.row) + oy) / double(ly)), wrap_half((double(p.col) + oz) / double(lz)));
        return p;
    }
}
