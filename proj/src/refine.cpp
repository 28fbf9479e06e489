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

#include <cmath>
#include <functional>
#include <limits>

namespace macaw
{
    namespace
    {
        using Theta5 = Eigen::Matrix<double, 5, 1>;

        // Coordinate weights d psi / d theta for theta = (k_y, k_z, Q11, Q12, Q22)
        Eigen::MatrixXd coordinate_weights(int ny, int nz)
        {
            Eigen::MatrixXd u(Eigen::Index(ny) * nz, 5);
            for (int iz = 0; iz < nz; ++iz)
                for (int iy = 0; iy < ny; ++iy)
                {
                    const double y = centered_index<double>(iy, ny), z = centered_index<double>(iz, nz);
                    u.row(Eigen::Index(iz) * ny + iy) << y, z, 0.5 * y * y, y * z, 0.5 * z * z;
                }
            return u;
        }

        Vec2d theta_k(const Eigen::VectorXd &t, Eigen::Index o) { return {t(o), t(o + 1)}; }

        Mat2d theta_q(const Eigen::VectorXd &t, Eigen::Index o)
        {
            Mat2d q;
            q << t(o + 2), t(o + 3), t(o + 3), t(o + 4);
            return q;
        }

        void put_spatial(Eigen::VectorXd &t, Eigen::Index o, const PathParams &p)
        {
            t(o) = p.k_bar(0);
            t(o + 1) = p.k_bar(1);
            t(o + 2) = p.q_bar(0, 0);
            t(o + 3) = 0.5 * (p.q_bar(0, 1) + p.q_bar(1, 0));
            t(o + 4) = p.q_bar(1, 1);
        }

        // Evaluates the variable-projection cost; fills the residual and Kaufman Jacobian when asked
        using CostFn = std::function<double(const Eigen::VectorXd &, CVector *, CMatrix *)>;

        struct LmSettings
        {
            int max_iter = 50;
            double lambda_init = 1e-3;
            double grad_tol = 0.0; // Absolute
            double rel_tol = 0.0;  // Relative cost change
            double cost_floor = 0.0;
        };

        LmReport levenberg_marquardt(Eigen::VectorXd &theta, const CostFn &eval, const LmSettings &s)
        {
            LmReport rep;
            CVector r;
            CMatrix jac;
            double cost = eval(theta, &r, &jac);
            if (!std::isfinite(cost))
                throw Error(Errc::non_finite, "LM: initial cost is not finite");
            rep.cost_history.push_back(cost);
            double lambda = s.lambda_init;
            bool reset_used = false;

            while (rep.iterations < s.max_iter)
            {
                if (cost <= s.cost_floor)
                {
                    rep.converged = true;
                    break;
                }
                const Eigen::MatrixXd a = (jac.adjoint() * jac).real();
                const Eigen::VectorXd g = (jac.adjoint() * r).real();
                if (g.norm() <= s.grad_tol)
                {
                    rep.converged = true;
                    break;
                }
                ++rep.iterations;
                const Eigen::VectorXd d = a.diagonal().cwiseMax(1e-300 + 1e-15 * a.diagonal().maxCoeff());

                bool accepted = false;
                while (!accepted)
                {
                    Eigen::MatrixXd damped = a;
                    damped.diagonal() += lambda * d;
                    const Eigen::VectorXd step = damped.ldlt().solve(-g);
                    const Eigen::VectorXd trial = theta + step;
                    const double trial_cost = step.allFinite() ? eval(trial, nullptr, nullptr) : std::numeric_limits<double>::quiet_NaN();
                    if (!std::isfinite(trial_cost))
                    {
                        if (reset_used)
                            throw Error(Errc::non_finite, "LM: cost became non-finite twice");
                        reset_used = true;
                        lambda = s.lambda_init;
                        continue;
                    }
                    if (trial_cost < cost)
                    {
                        const double change = (cost - trial_cost) / cost;
                        theta = trial;
                        cost = eval(theta, &r, &jac);
                        rep.cost_history.push_back(cost);
                        lambda = std::max(lambda / 10.0, 1e-12);
                        accepted = true;
                        if (change < s.rel_tol)
                            rep.converged = true;
                    }
                    else
                    {
                        lambda *= 10.0;
                        if (lambda > 1e12 || step.norm() <= 1e-15 * (theta.norm() + 1e-300))
                        {
                            rep.converged = true;
                            return rep;
                        }
                    }
                }
                if (rep.converged)
                    break;
            }
            return rep;
        }

        // Projects columns onto the orthogonal complement of span(basis)
        void kaufman_project(CMatrix &jac, const CMatrix &basis)
        {
            const Eigen::HouseholderQR<CMatrix> qr(basis);
            const CMatrix q = qr.householderQ() * CMatrix::Identity(basis.rows(), basis.cols());
            jac -= q * (q.adjoint() * jac);
        }
    }

    void stage1_residual_jacobian(const CVector &y_spatial, const SketchOperator &op, const Upa &upa, const Theta5 &theta,
                                  cdouble beta, CVector *residual, CMatrix *jacobian)
    {
        const Eigen::VectorXd t = theta;
        const CVector c = vec(awc_steering<double>(theta_k(t, 0), theta_q(t, 0), upa.n_y, upa.n_z));
        if (residual)
            *residual = y_spatial - beta * op.apply(c);
        if (jacobian)
        {
            const Eigen::MatrixXd u = coordinate_weights(upa.n_y, upa.n_z);
            jacobian->resize(op.rows(), 5);
            const cdouble f(0.0, kTwoPi);
            for (int p = 0; p < 5; ++p)
                jacobian->col(p) = f * beta * op.apply(CVector(u.col(p).cast<cdouble>().cwiseProduct(c)));
        }
    }

    Stage1Result refine_stage1(const CVector &y_spatial, const SketchOperator &op, const Upa &upa, const PathParams &init,
                               const EstimatorConfig &cfg)
    {
        if (y_spatial.size() != op.rows() || op.n() != upa.n_elements())
            throw Error(Errc::shape_mismatch, "refine_stage1: observation, operator and array disagree");
        const Eigen::MatrixXd u = coordinate_weights(upa.n_y, upa.n_z);
        cdouble beta_last = 0.0;

        const CostFn eval = [&](const Eigen::VectorXd &t, CVector *r, CMatrix *jac) {
            const CVector c = vec(awc_steering<double>(theta_k(t, 0), theta_q(t, 0), upa.n_y, upa.n_z));
            const CVector a = op.apply(c);
            const double an = a.squaredNorm();
            if (!(an > 0))
                return std::numeric_limits<double>::quiet_NaN();
            const cdouble beta = a.dot(y_spatial) / an;
            const CVector res = y_spatial - beta * a;
            if (r)
                *r = res;
            if (jac)
            {
                beta_last = beta;
                jac->resize(op.rows(), 5);
                const cdouble f(0.0, kTwoPi);
                for (int p = 0; p < 5; ++p)
                    jac->col(p) = f * beta * op.apply(CVector(u.col(p).cast<cdouble>().cwiseProduct(c)));
                kaufman_project(*jac, a);
            }
            return res.squaredNorm();
        };

        Eigen::VectorXd theta(5);
        put_spatial(theta, 0, init);
        LmSettings s;
        s.max_iter = cfg.lm_max_iter_stage1;
        s.lambda_init = cfg.lm_lambda_init;
        const double scale = y_spatial.squaredNorm();
        s.grad_tol = 1e-10 * scale;
        s.rel_tol = 1e-14;
        s.cost_floor = 1e-28 * scale;

        Stage1Result out;
        out.report = levenberg_marquardt(theta, eval, s);
        out.params = init;
        out.params.k_bar = theta_k(theta, 0);
        out.params.q_bar = theta_q(theta, 0);
        out.params.alpha = beta_last * std::conj(cispi2(init.s_bar));
        return out;
    }

    namespace
    {
        struct SeriesBasis
        {
            std::vector<CVector> b; // W (psi'^r . c0) / r!
            CVector gamma;          // Per-subcarrier factor
            CVector x;              // -j 2 pi eps delta_m
            Eigen::VectorXd psi;    // psi' (centred phase)
            CVector c0;
        };

        SeriesBasis series_basis(const SketchOperator &op, const PathParams &p, const OfdmConfig &ofdm, const Upa &upa)
        {
            SeriesBasis sb;
            const Eigen::VectorXd psi = spatial_phase(p.k_bar, p.q_bar, upa.n_y, upa.n_z);
            const double psi0 = 0.5 * (psi.maxCoeff() + psi.minCoeff());
            sb.psi = psi.array() - psi0;
            sb.c0.resize(psi.size());
            for (Eigen::Index i = 0; i < psi.size(); ++i)
                sb.c0(i) = cispi2(sb.psi(i));

            const int m_count = ofdm.n_subcarriers;
            const double eps = ofdm.epsilon();
            const double inv_sqrt_n = 1.0 / std::sqrt(double(upa.n_elements()));
            sb.gamma.resize(m_count);
            sb.x.resize(m_count);
            const double s_frac = p.s_bar - std::floor(p.s_bar);
            double x_max = 0.0;
            for (int m = 0; m < m_count; ++m)
            {
                const double e = eps * ofdm.delta(m);
                sb.gamma(m) = inv_sqrt_n * cispi2(s_frac + psi0 + e * (p.s_bar + psi0));
                sb.x(m) = cdouble(0.0, -kTwoPi * eps * ofdm.delta(m));
                x_max = std::max(x_max, std::abs(sb.x(m)));
            }

            const double z = x_max * sb.psi.cwiseAbs().maxCoeff();
            int terms = 1;
            for (double term = z; term >= 1e-16 && terms < 64; term *= z / double(terms + 1))
                ++terms;

            CVector w = sb.c0;
            for (int r = 0; r < terms; ++r)
            {
                sb.b.push_back(op.apply(w));
                w = w.cwiseProduct(sb.psi.cast<cdouble>()) / double(r + 1);
            }
            return sb;
        }

        // G[:,m] = gamma_m sum_r x_m^r B_r, by Horner
        CMatrix combine(const std::vector<CVector> &b, const CVector &gamma, const CVector &x)
        {
            CMatrix g(b.front().size(), gamma.size());
            for (Eigen::Index m = 0; m < gamma.size(); ++m)
            {
                CVector acc = b.back();
                for (int r = int(b.size()) - 2; r >= 0; --r)
                    acc = acc * x(m) + b[std::size_t(r)];
                g.col(m) = gamma(m) * acc;
            }
            return g;
        }

        // d G / d theta_p for a spatial weight u, truncated at `order`
        CMatrix spatial_derivative(const SketchOperator &op, const SeriesBasis &sb, const OfdmConfig &ofdm,
                                   const Eigen::VectorXd &u, int order)
        {
            std::vector<CVector> b;
            CVector w = u.cast<cdouble>().cwiseProduct(sb.c0);
            for (int r = 0; r <= order; ++r)
            {
                b.push_back(op.apply(w));
                w = w.cwiseProduct(sb.psi.cast<cdouble>()) / double(r + 1);
            }
            CVector gamma = sb.gamma;
            for (Eigen::Index m = 0; m < gamma.size(); ++m)
                gamma(m) *= cdouble(0.0, -kTwoPi * (1.0 + ofdm.epsilon() * ofdm.delta(int(m))));
            return combine(b, gamma, sb.x);
        }

        Eigen::Map<const CVector> flat(const CMatrix &m) { return {m.data(), m.size()}; }

        // Stacks G_k for all paths and, if asked, d G_k / d theta (without the alpha factor)
        void stage2_model(const SketchOperator &op, const std::vector<PathParams> &params, const OfdmConfig &ofdm,
                          const Upa &upa, int taylor_order, CMatrix &basis, CMatrix *dg)
        {
            const Eigen::Index len = op.rows() * ofdm.n_subcarriers;
            const Eigen::Index k_count = Eigen::Index(params.size());
            basis.resize(len, k_count);
            if (dg)
                dg->resize(len, 6 * k_count);
            const Eigen::MatrixXd u = dg ? coordinate_weights(upa.n_y, upa.n_z) : Eigen::MatrixXd();
            for (Eigen::Index k = 0; k < k_count; ++k)
            {
                const SeriesBasis sb = series_basis(op, params[std::size_t(k)], ofdm, upa);
                const CMatrix g = combine(sb.b, sb.gamma, sb.x);
                basis.col(k) = flat(g);
                if (!dg)
                    continue;
                CMatrix gs = g;
                for (int m = 0; m < ofdm.n_subcarriers; ++m)
                    gs.col(m) *= cdouble(0.0, -kTwoPi * (1.0 + ofdm.epsilon() * ofdm.delta(m)));
                dg->col(6 * k) = flat(gs);
                const int order = taylor_order < 0 ? int(sb.b.size()) - 1 : std::min(taylor_order, int(sb.b.size()) - 1);
                for (int p = 0; p < 5; ++p)
                    dg->col(6 * k + 1 + p) = flat(spatial_derivative(op, sb, ofdm, u.col(p), order));
            }
        }

        std::vector<PathParams> unpack(const Eigen::VectorXd &t, const std::vector<PathParams> &like)
        {
            std::vector<PathParams> out = like;
            for (std::size_t k = 0; k < out.size(); ++k)
            {
                const Eigen::Index o = 6 * Eigen::Index(k);
                out[k].s_bar = t(o);
                out[k].k_bar = theta_k(t, o + 1);
                out[k].q_bar = theta_q(t, o + 1);
            }
            return out;
        }
    }

    CMatrix compressed_path(const SketchOperator &op, const PathParams &p, const OfdmConfig &ofdm, const Upa &upa)
    {
        const SeriesBasis sb = series_basis(op, p, ofdm, upa);
        return combine(sb.b, sb.gamma, sb.x);
    }

    void stage2_residual_jacobian(const ObservationSet &obs, const SketchOperator &op, const std::vector<PathParams> &params,
                                  const OfdmConfig &ofdm, const Upa &upa, int taylor_order, CVector *residual, CMatrix *jacobian)
    {
        CMatrix basis;
        stage2_model(op, params, ofdm, upa, taylor_order, basis, jacobian);
        CVector alpha(Eigen::Index(params.size()));
        for (std::size_t k = 0; k < params.size(); ++k)
            alpha(Eigen::Index(k)) = params[k].alpha;
        if (residual)
            *residual = flat(obs.y) - basis * alpha;
        if (jacobian)
            for (Eigen::Index c = 0; c < jacobian->cols(); ++c)
                jacobian->col(c) *= -alpha(c / 6);
    }

    Stage2Result refine_stage2(const ObservationSet &obs, const SketchOperator &op, const std::vector<PathParams> &inits,
                               const OfdmConfig &ofdm, const Upa &upa, const EstimatorConfig &cfg)
    {
        if (inits.empty())
            throw Error(Errc::empty_path, "refine_stage2 needs at least one path");
        if (obs.y.rows() != op.rows() || obs.y.cols() != ofdm.n_subcarriers || op.n() != upa.n_elements())
            throw Error(Errc::shape_mismatch, "refine_stage2: observation, operator and configuration disagree");
        const Eigen::Map<const CVector> y = flat(obs.y);
        CVector alpha_last;

        const CostFn eval = [&](const Eigen::VectorXd &t, CVector *r, CMatrix *jac) {
            const auto params = unpack(t, inits);
            CMatrix basis;
            stage2_model(op, params, ofdm, upa, cfg.taylor_order, basis, jac);
            const CVector alpha = basis.colPivHouseholderQr().solve(CVector(y));
            const CVector res = y - basis * alpha;
            if (r)
                *r = res;
            if (jac)
            {
                alpha_last = alpha;
                for (Eigen::Index c = 0; c < jac->cols(); ++c)
                    jac->col(c) *= -alpha(c / 6);
                kaufman_project(*jac, basis);
            }
            return res.squaredNorm();
        };

        Eigen::VectorXd theta(6 * Eigen::Index(inits.size()));
        for (std::size_t k = 0; k < inits.size(); ++k)
        {
            theta(6 * Eigen::Index(k)) = inits[k].s_bar;
            put_spatial(theta, 6 * Eigen::Index(k) + 1, inits[k]);
        }
        LmSettings s;
        s.max_iter = cfg.lm_max_iter_stage2;
        s.lambda_init = cfg.lm_lambda_init;
        const double scale = obs.y.squaredNorm();
        s.grad_tol = 1e-14 * scale;
        s.rel_tol = 1e-12;
        s.cost_floor = 1e-30 * scale;

        Stage2Result out;
        out.report = levenberg_marquardt(theta, eval, s);
        out.params = unpack(theta, inits);
        for (std::size_t k = 0; k < out.params.size(); ++k)
            out.params[k].alpha = alpha_last(Eigen::Index(k));
        return out;
    }
}
