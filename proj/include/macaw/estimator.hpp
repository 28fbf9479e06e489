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

#ifndef MACAW_ESTIMATOR_HPP
#define MACAW_ESTIMATOR_HPP

#include "macaw/channel_model.hpp"
#include "macaw/common.hpp"
#include "macaw/geometry_optics.hpp"
#include "macaw/measurement.hpp"

#include <string>
#include <vector>

namespace macaw
{
    struct EstimatorConfig
    {
        int n_paths = 6;

        int relax_max_iter = 20;
        double relax_tol = 1e-8;
        int relax_pad = 8;
        bool relax_energy_stop = false; // Stop adding paths once a tone's energy sinks into the noise floor

        int fft_zero_pad = 4;
        int smooth_window = 3;
        double threshold_sigmas = 3.0;

        int lm_max_iter_stage1 = 50;
        int lm_max_iter_stage2 = 10;
        double lm_lambda_init = 1e-3;
        int taylor_order = 2; // Per-subcarrier expansion order of the stage-2 Jacobian; first order misses 1e-3 at |k| near 1/2

        double r_min = 1.7; // [m]

        void validate() const;
    };

    struct PathSeparation
    {
        std::vector<double> s_bar;        // [wavelengths]
        std::vector<double> nu;           // Tone frequency eps * s_bar [cycles per subcarrier]
        std::vector<CVector> y_spatial;   // Compressed centre-frequency response per path
        std::vector<double> energy;       // Energy of each fitted tone
        std::vector<double> residual_history;
        double residual_energy = 0.0;
        int iterations = 0;
    };

    // Separates superimposed delay tones across subcarriers; paths sorted by energy, descending
    PathSeparation relax_separate(const ObservationSet &obs, int n_paths, const OfdmConfig &ofdm, const EstimatorConfig &cfg);

    // Rectangle on the unpadded 2D DFT grid of the array; ranges wrap around the grid edge
    struct SpectralBox
    {
        int grid_rows = 0, grid_cols = 0;
        int row_begin = 0, row_count = 0;
        int col_begin = 0, col_count = 0;

        bool contains(int r, int c) const;
        int size() const { return row_count * col_count; }
    };

    struct Recovery
    {
        CVector h_hat;
        SpectralBox box;
        bool empty_box = false; // Nothing above threshold; box is the single strongest bin
    };

    Recovery recover_path_response(const CVector &y_spatial, const SketchOperator &op, const Upa &upa, const EstimatorConfig &cfg);

    struct CurvatureEstimate
    {
        Mat2d q_bar = Mat2d::Zero();
        double f1y = 0.0, f1z = 0.0, f2y = 0.0, f2z = 0.0;
        double intercept = 0.0; // V
        int lag_y = 0, lag_z = 0;
        double score = 0.0;
    };

    // Lags round(N/3) along each axis
    int curvature_lag(int n);

    CurvatureEstimate estimate_curvature(const CMatrix &h_unvec, const EstimatorConfig &cfg, const Upa &upa, double wavelength);

    // vec(S) with S = exp(-j pi n^T Q n)
    CVector phase_compensation(const Mat2d &q_bar, int n_y, int n_z);

    Vec2d estimate_direction(const CMatrix &h_unvec, const Mat2d &q_bar_hat, const EstimatorConfig &cfg);

    struct LmReport
    {
        int iterations = 0;
        std::vector<double> cost_history; // Accepted costs, starting with the initial one
        bool converged = false;
    };

    struct Stage1Result
    {
        PathParams params; // alpha referred to s_bar of the initial value
        LmReport report;
    };

    // Five spatial parameters (k_bar, Q11, Q12, Q22) against y = beta W c
    Stage1Result refine_stage1(const CVector &y_spatial, const SketchOperator &op, const Upa &upa,
                               const PathParams &init, const EstimatorConfig &cfg);

    // Residual r = y - beta W c(theta) and its Jacobian d r / d theta with beta held fixed
    void stage1_residual_jacobian(const CVector &y_spatial, const SketchOperator &op, const Upa &upa,
                                  const Eigen::Matrix<double, 5, 1> &theta, cdouble beta, CVector *residual, CMatrix *jacobian);

    struct Stage2Result
    {
        std::vector<PathParams> params;
        LmReport report;
    };

    Stage2Result refine_stage2(const ObservationSet &obs, const SketchOperator &op, const std::vector<PathParams> &inits,
                               const OfdmConfig &ofdm, const Upa &upa, const EstimatorConfig &cfg);

    // W H~_k for one path with unit gain (R x M)
    CMatrix compressed_path(const SketchOperator &op, const PathParams &p, const OfdmConfig &ofdm, const Upa &upa);

    // Stage-2 residual vec(Y - sum alpha_k W H~_k) and Jacobian (columns: per path s_bar, k_y, k_z, Q11, Q12, Q22)
    // with alphas held fixed. taylor_order < 0 gives the exact Jacobian.
    void stage2_residual_jacobian(const ObservationSet &obs, const SketchOperator &op, const std::vector<PathParams> &params,
                                  const OfdmConfig &ofdm, const Upa &upa, int taylor_order, CVector *residual, CMatrix *jacobian);

    struct StageTimings
    {
        double relax = 0.0, recovery = 0.0, curvature = 0.0, direction = 0.0;
        double stage1 = 0.0, stage2 = 0.0, reconstruct = 0.0, total = 0.0; // [s]
    };

    struct PathDiagnostics
    {
        bool dropped = false;
        std::string error;
        double relax_energy = 0.0;
        SpectralBox box;
        bool empty_box = false;
        CurvatureEstimate curvature;
        Vec2d k_bar_init = Vec2d::Zero();
        int stage1_iterations = 0;
        double stage1_cost = 0.0;
    };

    struct EstimateDiagnostics
    {
        std::vector<PathDiagnostics> paths;
        double relax_residual = 0.0;
        int relax_iterations = 0;
        std::vector<double> stage2_cost;
        int stage2_iterations = 0;
        std::string stage2_error;
        StageTimings timings;
    };

    struct EstimateResult
    {
        std::vector<PathParams> params;
        CMatrix h_hat;
        EstimateDiagnostics diagnostics;
    };

    EstimateResult estimate(const ObservationSet &obs, const EstimatorConfig &cfg, const Upa &upa, const OfdmConfig &ofdm);
}

#endif
