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

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace macaw
{
    void EstimatorConfig::validate() const
    {
        if (n_paths < 1)
            throw Error(Errc::invalid_argument, "estimator needs at least one path");
        if (relax_max_iter < 1 || !(relax_tol > 0) || relax_pad < 1 || fft_zero_pad < 1)
            throw Error(Errc::invalid_argument, "invalid RELAX or padding settings");
        if (smooth_window < 1 || smooth_window % 2 == 0)
            throw Error(Errc::invalid_argument, "smoothing window must be a positive odd integer");
        if (lm_max_iter_stage1 < 1 || lm_max_iter_stage2 < 0 || !(lm_lambda_init > 0))
            throw Error(Errc::invalid_argument, "invalid Levenberg-Marquardt settings");
        if (!(r_min > 0))
            throw Error(Errc::invalid_argument, "r_min must be positive");
    }

    namespace
    {
        // Tone e^{-j 2 pi nu delta_m} over the centred subcarrier index
        CVector tone(double nu, int m_count)
        {
            CVector t(m_count);
            for (int m = 0; m < m_count; ++m)
                t(m) = cispi2(nu * centered_index<double>(m, m_count));
            return t;
        }

        struct ToneFit
        {
            double nu = 0.0;
            CVector amp;
        };

        // Multi-snapshot periodogram sum_r |sum_m E[r,m] e^{+j 2 pi nu m}|^2
        double periodogram(const CMatrix &e, double nu)
        {
            const Eigen::Index m_count = e.cols();
            CVector w(m_count);
            for (Eigen::Index m = 0; m < m_count; ++m)
                w(m) = std::conj(cispi2(nu * double(m)));
            return (e * w).squaredNorm();
        }

        ToneFit fit_tone(const CMatrix &e, int pad)
        {
            const Eigen::Index rows = e.rows(), m_count = e.cols();
            const Eigen::Index len = fft::next_pow2(m_count * pad);
            Eigen::VectorXd power = Eigen::VectorXd::Zero(len);
            std::vector<cdouble> in(static_cast<std::size_t>(len)), out(static_cast<std::size_t>(len));
            for (Eigen::Index r = 0; r < rows; ++r)
            {
                std::fill(in.begin(), in.end(), cdouble(0.0));
                for (Eigen::Index m = 0; m < m_count; ++m)
                    in[std::size_t(m)] = e(r, m);
                fft::inverse(in, out);
                for (Eigen::Index k = 0; k < len; ++k)
                    power(k) += std::norm(out[std::size_t(k)]);
            }
            Eigen::Index k0 = 0;
            const double peak = power.maxCoeff(&k0);
            const double off = parabolic_offset(power((k0 + len - 1) % len), peak, power((k0 + 1) % len));
            const double nu0 = (double(k0) + off) / double(len);

            // Continuous polish of the interpolated peak
            const double half = 1.0 / double(len);
            auto neg = [&](double nu) { return -periodogram(e, nu); };
            const auto [nu_best, val] = boost::math::tools::brent_find_minima(neg, nu0 - half, nu0 + half, 40);
            ToneFit f;
            f.nu = -val >= peak ? nu_best : double(k0) / double(len);
            f.nu -= std::floor(f.nu);
            f.amp = e * tone(f.nu, int(m_count)).conjugate() / double(m_count);
            return f;
        }
    }

    PathSeparation relax_separate(const ObservationSet &obs, int n_paths, const OfdmConfig &ofdm, const EstimatorConfig &cfg)
    {
        const CMatrix &y = obs.y;
        const int m_count = int(y.cols());
        if (n_paths < 1)
            throw Error(Errc::invalid_argument, "relax_separate: at least one path is required");
        if (m_count < 2 * n_paths)
            throw Error(Errc::model_order_too_high, "relax_separate: fewer than two subcarriers per path");

        std::vector<ToneFit> fits;
        std::vector<CMatrix> parts; // a_k t_k^T
        PathSeparation sep;
        const double total = y.squaredNorm();

        auto residual_of = [&](int skip) {
            CMatrix e = y;
            for (int j = 0; j < int(parts.size()); ++j)
                if (j != skip)
                    e -= parts[std::size_t(j)];
            return e;
        };
        auto part_of = [&](const ToneFit &f) { return CMatrix(f.amp * tone(f.nu, m_count).transpose()); };

        for (int k = 0; k < n_paths; ++k)
        {
            ToneFit f = fit_tone(residual_of(-1), cfg.relax_pad);
            if (cfg.relax_energy_stop && obs.sigma_n > 0.0)
            {
                const double floor_energy = 3.0 * double(y.rows()) * obs.sigma_n * obs.sigma_n * (1.0 + std::log(double(m_count)));
                if (double(m_count) * f.amp.squaredNorm() < floor_energy)
                    break;
            }
            fits.push_back(f);
            parts.push_back(part_of(f));

            double prev = residual_of(-1).squaredNorm();
            for (int it = 0; it < cfg.relax_max_iter; ++it)
            {
                ++sep.iterations;
                for (int i = 0; i <= k; ++i)
                {
                    fits[std::size_t(i)] = fit_tone(residual_of(i), cfg.relax_pad);
                    parts[std::size_t(i)] = part_of(fits[std::size_t(i)]);
                }
                const double res = residual_of(-1).squaredNorm();
                sep.residual_history.push_back(res);
                if (res > prev * (1.0 + 1e-9) + 1e-300)
                    throw Error(Errc::model_order_too_high, "relax_separate: residual energy increased");
                const bool done = prev - res <= cfg.relax_tol * std::max(prev, 1e-300 * total);
                prev = res;
                if (done)
                    break;
            }
        }

        std::vector<std::size_t> order(fits.size());
        std::iota(order.begin(), order.end(), std::size_t(0));
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fits[a].amp.squaredNorm() > fits[b].amp.squaredNorm(); });
        const double eps = ofdm.epsilon();
        for (std::size_t i : order)
        {
            sep.nu.push_back(fits[i].nu);
            sep.s_bar.push_back(fits[i].nu / eps);
            sep.y_spatial.push_back(fits[i].amp);
            sep.energy.push_back(double(m_count) * fits[i].amp.squaredNorm());
        }
        sep.residual_energy = residual_of(-1).squaredNorm();
        return sep;
    }
}
