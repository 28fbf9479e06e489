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

#include <chrono>

namespace macaw
{
    namespace
    {
        class Stopwatch
        {
        public:
            double lap()
            {
                const auto now = std::chrono::steady_clock::now();
                const double s = std::chrono::duration<double>(now - last_).count();
                last_ = now;
                return s;
            }

        private:
            std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
        };
    }

    EstimateResult estimate(const ObservationSet &obs, const EstimatorConfig &cfg, const Upa &upa, const OfdmConfig &ofdm)
    {
        cfg.validate();
        ofdm.validate();
        upa.validate();
        if (!obs.op)
            throw Error(Errc::invalid_argument, "estimate: observation has no measurement operator");
        const SketchOperator &op = *obs.op;
        if (obs.y.rows() != op.rows() || obs.y.cols() != ofdm.n_subcarriers || op.n() != upa.n_elements())
            throw Error(Errc::shape_mismatch, "estimate: observation, operator and configuration disagree");

        EstimateResult out;
        EstimateDiagnostics &diag = out.diagnostics;
        StageTimings &tm = diag.timings;
        Stopwatch total, sw;

        const PathSeparation sep = relax_separate(obs, cfg.n_paths, ofdm, cfg);
        diag.relax_residual = sep.residual_energy;
        diag.relax_iterations = sep.iterations;
        tm.relax = sw.lap();

        const double lambda = ofdm.wavelength();
        std::vector<PathParams> stage1;
        for (std::size_t k = 0; k < sep.s_bar.size(); ++k)
        {
            PathDiagnostics pd;
            pd.relax_energy = sep.energy[k];
            try
            {
                const CVector &yk = sep.y_spatial[k];
                const Recovery rec = recover_path_response(yk, op, upa, cfg);
                pd.box = rec.box;
                pd.empty_box = rec.empty_box;
                tm.recovery += sw.lap();

                pd.curvature = estimate_curvature(unvec(rec.h_hat, upa.n_y, upa.n_z), cfg, upa, lambda);
                tm.curvature += sw.lap();

                // W diag(S) is again an SRFT; recovering through it flattens the wavefront first
                const SketchOperator comp = op.compensated(phase_compensation(pd.curvature.q_bar, upa.n_y, upa.n_z));
                const Recovery flat = recover_path_response(yk, comp, upa, cfg);
                pd.k_bar_init = estimate_direction(unvec(flat.h_hat, upa.n_y, upa.n_z), Mat2d::Zero(), cfg);
                tm.direction += sw.lap();

                PathParams init;
                init.k_bar = pd.k_bar_init;
                init.q_bar = pd.curvature.q_bar;
                init.s_bar = sep.s_bar[k];
                const Stage1Result s1 = refine_stage1(yk, op, upa, init, cfg);
                pd.stage1_iterations = s1.report.iterations;
                pd.stage1_cost = s1.report.cost_history.back();
                stage1.push_back(s1.params);
                tm.stage1 += sw.lap();
            }
            catch (const Error &e)
            {
                pd.dropped = true;
                pd.error = e.what();
                sw.lap();
            }
            diag.paths.push_back(pd);
        }

        out.params = stage1;
        if (!stage1.empty())
        {
            try
            {
                Stage2Result s2 = refine_stage2(obs, op, stage1, ofdm, upa, cfg);
                diag.stage2_cost = s2.report.cost_history;
                diag.stage2_iterations = s2.report.iterations;
                out.params = std::move(s2.params);
            }
            catch (const Error &e)
            {
                diag.stage2_error = e.what();
            }
        }
        tm.stage2 = sw.lap();

        out.h_hat = out.params.empty() ? CMatrix(CMatrix::Zero(upa.n_elements(), ofdm.n_subcarriers))
                                       : synth_channel(out.params, ofdm, upa);
        tm.reconstruct = sw.lap();
        tm.total = total.lap();
        return out;
    }
}
