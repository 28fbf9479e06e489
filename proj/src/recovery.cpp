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
#include "macaw/kadane.hpp"

#include <cmath>
#include <vector>

namespace macaw
{
    bool SpectralBox::contains(int r, int c) const
    {
        const int dr = ((r - row_begin) % grid_rows + grid_rows) % grid_rows;
        const int dc = ((c - col_begin) % grid_cols + grid_cols) % grid_cols;
        return dr < row_count && dc < col_count;
    }

    namespace
    {
        // Circular moving average with a w x w window
        Eigen::MatrixXd smooth(const Eigen::MatrixXd &p, int w)
        {
            const int rows = int(p.rows()), cols = int(p.cols()), h = w / 2;
            Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
            for (int c = 0; c < cols; ++c)
                for (int r = 0; r < rows; ++r)
                {
                    double acc = 0.0;
                    for (int dc = -h; dc <= h; ++dc)
                        for (int dr = -h; dr <= h; ++dr)
                            acc += p((r + dr + rows) % rows, (c + dc + cols) % cols);
                    out(r, c) = acc / double(w * w);
                }
            return out;
        }
    }

    Recovery recover_path_response(const CVector &y_spatial, const SketchOperator &op, const Upa &upa, const EstimatorConfig &cfg)
    {
        if (y_spatial.size() != op.rows() || op.n() != upa.n_elements())
            throw Error(Errc::shape_mismatch, "recover_path_response: observation, operator and array disagree");
        const int ny = upa.n_y, nz = upa.n_z;
        const double scale = double(op.n()) / double(op.rows());
        CMatrix spec = unvec(scale * op.apply_adjoint(y_spatial), ny, nz);
        fft::transform2(spec, false);

        const Eigen::MatrixXd power = spec.cwiseAbs2();
        Eigen::MatrixXd t = smooth(power, cfg.smooth_window);
        const double mean = t.mean();
        const double sd = std::sqrt((t.array() - mean).square().mean());
        t.array() -= mean + cfg.threshold_sigmas * sd;

        Recovery rec;
        SpectralBox &box = rec.box;
        box.grid_rows = ny;
        box.grid_cols = nz;
        if (!(t.maxCoeff() > 0.0))
        {
            Eigen::Index r = 0, c = 0;
            power.maxCoeff(&r, &c);
            box.row_begin = int(r);
            box.col_begin = int(c);
            box.row_count = box.col_count = 1;
            rec.empty_box = true;
        }
        else
        {
            // Alternating 1D Kadane on max-projections, each restricted to the other axis' current extent
            // and seeded at the strongest bin. Projecting over the full grid lets isolated noise bins above
            // the threshold make every row positive once the grid is large.
            Eigen::Index r0 = 0, c0 = 0;
            t.maxCoeff(&r0, &c0);
            box.row_begin = int(r0);
            box.col_begin = int(c0);
            box.row_count = box.col_count = 1;
            for (int pass = 0; pass < 4; ++pass)
            {
                const SpectralBox prev = box;
                std::vector<double> rows(std::size_t(ny), -INFINITY);
                for (int j = 0; j < box.col_count; ++j)
                {
                    const int c = (box.col_begin + j) % nz;
                    for (int r = 0; r < ny; ++r)
                        rows[std::size_t(r)] = std::max(rows[std::size_t(r)], t(r, c));
                }
                const Subarray rs = max_circular_subarray(rows);
                box.row_begin = int(rs.begin);
                box.row_count = int(rs.length);

                std::vector<double> cols(std::size_t(nz), -INFINITY);
                for (int c = 0; c < nz; ++c)
                    for (int i = 0; i < box.row_count; ++i)
                        cols[std::size_t(c)] = std::max(cols[std::size_t(c)], t((box.row_begin + i) % ny, c));
                const Subarray cs = max_circular_subarray(cols);
                box.col_begin = int(cs.begin);
                box.col_count = int(cs.length);
                if (box.row_begin == prev.row_begin && box.row_count == prev.row_count && box.col_begin == prev.col_begin &&
                    box.col_count == prev.col_count)
                    break;
            }
        }

        for (int c = 0; c < nz; ++c)
            for (int r = 0; r < ny; ++r)
                if (!box.contains(r, c))
                    spec(r, c) = 0.0;
        fft::transform2(spec, true);
        rec.h_hat = vec(spec) / double(op.n());
        return rec;
    }

    CVector phase_compensation(const Mat2d &q_bar, int n_y, int n_z)
    {
        const Eigen::VectorXd psi = spatial_phase<double>(Vec2d::Zero(), q_bar, n_y, n_z);
        CVector s(psi.size());
        for (Eigen::Index i = 0; i < psi.size(); ++i)
            s(i) = cispi2(psi(i));
        return s;
    }

    Vec2d estimate_direction(const CMatrix &h_unvec, const Mat2d &q_bar_hat, const EstimatorConfig &cfg)
    {
        const int ny = int(h_unvec.rows()), nz = int(h_unvec.cols());
        const CMatrix s = unvec(phase_compensation(q_bar_hat, ny, nz), ny, nz);
        const CMatrix flat = s.conjugate().cwiseProduct(h_unvec);
        const fft::SpectralPeak peak = fft::spectral_peak(flat, cfg.fft_zero_pad);
        return {fft::wrap_half(-peak.freq(0)), fft::wrap_half(-peak.freq(1))};
    }
}
