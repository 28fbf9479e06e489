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

#include "macaw/swc_similarity.hpp"

#include "macaw/fft.hpp"
#include "macaw/optim.hpp"
#include "macaw/random.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace macaw
{
    double similarity_scale(double mu)
    {
        return 1.0 + (4.0 / kPi - 1.0) * std::exp(-mu * mu);
    }

    double similarity_bound(double mu)
    {
        if (mu < 0.0)
            throw Error(Errc::invalid_argument, "similarity_bound needs mu >= 0");
        const double j0 = std::cyl_bessel_j(0.0, mu);
        const double j1 = std::cyl_bessel_j(1.0, mu);
        return 0.25 * kPi * similarity_scale(mu) * std::sqrt(j0 * j0 + j1 * j1);
    }

    AnisotropyReport mu_star(const Mat2d &q_bs, const Mat2d &p_proj, int n_y, int n_z, double d_ant, double wavelength)
    {
        if (std::abs(p_proj.determinant()) < 1e-9)
            throw Error(Errc::singular_projection, "mu_star: projection onto the array is rank deficient");

        Eigen::SelfAdjointEigenSolver<Mat2d> es;
        es.computeDirect(symmetrize<double>(q_bs));
        // Eigen sorts ascending; rows of V are the eigenvectors so that Q = V^T diag(q) V
        AnisotropyReport r;
        r.q1 = es.eigenvalues()(1);
        r.q2 = es.eigenvalues()(0);
        Mat2d v;
        v.row(0) = es.eigenvectors().col(1).transpose();
        v.row(1) = es.eigenvectors().col(0).transpose();

        const Mat2d d = Vec2d(0.5 * n_y, 0.5 * n_z).asDiagonal();
        const Mat2d vpd = v * p_proj * d;
        r.m_matrix = vpd * vpd.transpose();

        const double scale = kPi * d_ant * d_ant / (2.0 * wavelength) * std::abs(r.q1 - r.q2);
        r.mu_star = scale * std::min(r.m_matrix(0, 0), r.m_matrix(1, 1));
        r.bound = similarity_bound(r.mu_star);
        return r;
    }

    double disk_integral_oracle(double lambda1, double lambda2)
    {
        using boost::math::quadrature::gauss_kronrod;
        const double s = 0.5 * (lambda1 + lambda2);
        const double mu = 0.5 * std::abs(lambda1 - lambda2);
        auto re = [&](double u) { return std::cos(s * u) * std::cyl_bessel_j(0.0, mu * u); };
        auto im = [&](double u) { return std::sin(s * u) * std::cyl_bessel_j(0.0, mu * u); };
        const double a = gauss_kronrod<double, 61>::integrate(re, 0.0, 1.0, 20, 1e-12);
        const double b = gauss_kronrod<double, 61>::integrate(im, 0.0, 1.0, 20, 1e-12);
        return 0.25 * kPi * similarity_scale(mu) * std::hypot(a, b);
    }

    PathParams swc_index_params(const Vec2d &k_bar, double rho, double d_ant, double wavelength)
    {
        PathParams p;
        p.k_bar = k_bar;
        const Vec2d k2 = (wavelength / d_ant) * k_bar;
        p.q_bar = (d_ant * d_ant * rho / wavelength) * (Mat2d::Identity() - k2 * k2.transpose());
        return p;
    }

    namespace
    {
        // |<b(k_bar, rho), c>| for unit-norm c
        double swc_similarity(const CMatrix &c, const Vec2d &k_bar, double rho, double d_ant, double wavelength)
        {
            const Vec2d k2 = (wavelength / d_ant) * k_bar;
            if (k2.squaredNorm() >= 1.0 || rho < 0.0)
                return 0.0;
            const PathParams p = swc_index_params(k_bar, rho, d_ant, wavelength);
            const int ny = int(c.rows()), nz = int(c.cols());
            const double qyy = p.q_bar(0, 0), qyz = p.q_bar(0, 1), qzz = p.q_bar(1, 1);
            // Along a column psi is quadratic in y, so the phasor follows from two rotations per step
            // (second difference qyy); restarting every column keeps the drift near ny^2 ulp
            const cdouble rot = std::conj(cispi2(qyy));
            const double y0 = centered_index<double>(0, ny);
            cdouble acc = 0.0;
            for (int iz = 0; iz < nz; ++iz)
            {
                const double z = centered_index<double>(iz, nz);
                const double b = p.k_bar(0) + qyz * z;
                cdouble w = std::conj(cispi2(p.k_bar(1) * z + 0.5 * qzz * z * z + b * y0 + 0.5 * qyy * y0 * y0));
                cdouble step = std::conj(cispi2(b + qyy * (y0 + 0.5)));
                const cdouble *col = c.col(iz).data();
                for (int iy = 0; iy < ny; ++iy)
                {
                    acc += col[iy] * w;
                    w *= step;
                    step *= rot;
                }
            }
            return std::abs(acc) / std::sqrt(double(c.size()));
        }

        struct GridCell
        {
            double value = 0.0;
            double rho = 0.0;
            Vec2d k_bar = Vec2d::Zero();
        };

        GridCell fft_peak(const CMatrix &x, int pad)
        {
            const fft::SpectralPeak p = fft::spectral_peak(x, pad);
            GridCell g;
            g.value = p.magnitude;
            g.k_bar = Vec2d(fft::wrap_half(-p.freq(0)), fft::wrap_half(-p.freq(1)));
            return g;
        }

        // Circular power centroid of the spectrum. A residual chirp spreads over a band whose peak
        // sits near an edge, while its linear phase is the band centre.
        Vec2d spectral_centroid(const CMatrix &x)
        {
            CMatrix s = x;
            fft::transform2(s, false);
            const Eigen::MatrixXd pw = s.cwiseAbs2();
            const Eigen::VectorXd rows = pw.rowwise().sum(), cols = pw.colwise().sum().transpose();
            auto centre = [](const Eigen::VectorXd &m) {
                cdouble acc = 0.0;
                for (Eigen::Index i = 0; i < m.size(); ++i)
                    acc += m(i) * std::conj(cispi2(double(i) / double(m.size())));
                return std::arg(acc) / kTwoPi;
            };
            return {fft::wrap_half(-centre(rows)), fft::wrap_half(-centre(cols))};
        }
    }

    SwcFit best_swc_fit(const CMatrix &c_in, const Upa &upa, double wavelength, const SwcFitGrid &grid)
    {
        if (c_in.rows() != upa.n_y || c_in.cols() != upa.n_z)
            throw Error(Errc::shape_mismatch, "best_swc_fit: steering matrix does not match the array");
        const double cn = c_in.norm();
        if (!(cn > 0.0))
            throw Error(Errc::zero_reference, "best_swc_fit: zero steering matrix");
        const CMatrix c = c_in / cn;
        const double d = upa.d_ant;

        const double rho_max = grid.rho_max > 0.0 ? grid.rho_max : 1.0 / (upa.near_field_radius(wavelength) / 5.0);
        const int n_rho = std::max(grid.n_rho, 2);
        const double drho = rho_max / double(n_rho - 1);

        // Coarse stage: dechirp with each candidate sphere, then locate the direction by FFT
        std::vector<GridCell> cells;
        cells.reserve(n_rho);
        Vec2d k_ref = fft_peak(c, grid.pad).k_bar;
        const Vec2d k2_ref = (wavelength / d) * k_ref;
        const bool k_ref_valid = k2_ref.squaredNorm() < 1.0;
        for (int i = 0; i < n_rho; ++i)
        {
            const double rho = drho * i;
            const PathParams sp = swc_index_params(k_ref_valid ? k_ref : Vec2d::Zero(), rho, d, wavelength);
            const Eigen::VectorXd chirp = spatial_phase(Vec2d::Zero().eval(), sp.q_bar, upa.n_y, upa.n_z);
            CMatrix x(c.rows(), c.cols());
            for (Eigen::Index n = 0; n < chirp.size(); ++n)
                x.data()[n] = c.data()[n] * std::conj(cispi2(chirp(n)));
            // Rank by the exact similarity: the dechirp used k_ref, so the peak height is only indicative
            GridCell g = fft_peak(x, grid.pad);
            g.rho = rho;
            g.value = swc_similarity(c, g.k_bar, rho, d, wavelength);
            cells.push_back(g);
            g.k_bar = spectral_centroid(x);
            g.value = swc_similarity(c, g.k_bar, rho, d, wavelength);
            cells.push_back(g);
        }
        std::sort(cells.begin(), cells.end(), [](const GridCell &a, const GridCell &b) { return a.value > b.value; });

        auto cost = [&](const Eigen::VectorXd &x) { return -swc_similarity(c, Vec2d(x(0), x(1)), x(2), d, wavelength); };
        const Eigen::Vector3d step0(0.5 / (grid.pad * upa.n_y), 0.5 / (grid.pad * upa.n_z), 0.5 * drho);

        SwcFit best;
        best.cos_sim = -1.0;
        const int starts = std::min<int>(grid.n_starts, int(cells.size()));
        for (int s = 0; s < starts; ++s)
        {
            Eigen::VectorXd x(3);
            x << cells[s].k_bar(0), cells[s].k_bar(1), cells[s].rho;
            Eigen::VectorXd step = step0;
            NelderMeadResult r = nelder_mead(cost, x, step, grid.max_iter);
            for (int k = 0; k < grid.restarts; ++k)
            {
                step *= 0.1;
                NelderMeadResult r2 = nelder_mead(cost, r.x, step, grid.max_iter);
                if (r2.value <= r.value)
                    r = r2;
            }
            if (-r.value > best.cos_sim)
            {
                best.cos_sim = -r.value;
                best.k_bar = Vec2d(r.x(0), r.x(1));
                best.rho = std::max(r.x(2), 0.0);
            }
        }

        const Vec2d k2 = (wavelength / d) * best.k_bar;
        const double kn = std::sqrt(std::max(0.0, 1.0 - k2.squaredNorm()));
        best.k_los = (k2(0) * upa.row_dir + k2(1) * upa.col_dir - kn * upa.normal()).normalized();
        best.r_los = best.rho > 0.0 ? 1.0 / best.rho : std::numeric_limits<double>::infinity();
        return best;
    }

    BoundSample bound_sample(const BoundExperimentConfig &cfg, int bin, int index, std::uint64_t seed)
    {
        if (cfg.sizes.empty() || cfg.n_bins < 1)
            throw Error(Errc::invalid_argument, "bound experiment needs array sizes and bins");
        Rng rng(derive_seed(seed, std::uint64_t(index)));
        const double width = cfg.mu_max / cfg.n_bins;
        const double target = (bin + rng.uniform()) * width;

        for (int attempt = 0; attempt < 10000; ++attempt)
        {
            const int n = cfg.sizes[rng.index(cfg.sizes.size())];
            Upa upa;
            upa.n_y = upa.n_z = n;
            upa.d_ant = cfg.d_ant;
            upa.row_dir = Vec3d::UnitY();
            upa.col_dir = Vec3d::UnitZ();
            const Vec3d normal = upa.normal();

            // Arrival direction within the incidence cone, random tangent basis and principal axes
            const double theta = std::acos(1.0 - rng.uniform() * (1.0 - std::cos(cfg.max_incidence_deg * kPi / 180.0)));
            const double phi = kTwoPi * rng.uniform();
            const Vec3d k = (-std::cos(theta) * normal + std::sin(theta) * (std::cos(phi) * upa.row_dir + std::sin(phi) * upa.col_dir)).normalized();
            Wavefront w;
            w.direction = k;
            auto [b1, b2] = make_tangent_basis<double>(k);
            const double rot = kTwoPi * rng.uniform();
            w.x1 = std::cos(rot) * b1 + std::sin(rot) * b2;
            w.x2 = k.cross(w.x1);
            const double beta = kPi * rng.uniform();
            Mat2d rb;
            rb << std::cos(beta), -std::sin(beta), std::sin(beta), std::cos(beta);
            const double u = rng.uniform();

            const Mat2d p = projection_matrix(w, upa);
            const Mat2d unit_aniso = rb * Vec2d(1.0, 0.0).asDiagonal() * rb.transpose();
            const double per_unit = mu_star(unit_aniso, p, n, n, upa.d_ant, cfg.wavelength).mu_star;
            const double q_max = 1.0 / (upa.near_field_radius(cfg.wavelength) / 5.0);
            if (!(per_unit > 0.0))
                continue;
            const double dq = target / per_unit;
            if (dq > q_max)
                continue;
            const double q_lo = u * (q_max - dq);
            w.curvature = rb * Vec2d(q_lo + dq, q_lo).asDiagonal() * rb.transpose();

            const PathParams ep = effective_params(w, upa, cfg.wavelength);
            const CMatrix c = awc_steering(ep.k_bar, ep.q_bar, n, n);
            const SwcFit fit = best_swc_fit(c, upa, cfg.wavelength, cfg.grid);
            const AnisotropyReport rep = mu_star(w.curvature, p, n, n, upa.d_ant, cfg.wavelength);

            BoundSample s;
            s.bin = bin;
            s.index = index;
            s.n = n;
            s.mu_star = rep.mu_star;
            s.cos_sim = fit.cos_sim;
            s.bound = rep.bound;
            return s;
        }
        throw Error(Errc::sampling_exhausted, "bound experiment could not place a feasible sample");
    }

    std::vector<BoundSample> bound_experiment(const BoundExperimentConfig &cfg, std::uint64_t seed, int jobs)
    {
        const int total = cfg.n_bins * cfg.per_bin;
        std::vector<BoundSample> out(std::size_t(std::max(total, 0)));
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (int i = next++; i < total; i = next++)
                out[std::size_t(i)] = bound_sample(cfg, i / cfg.per_bin, i % cfg.per_bin, seed);
        };
        const int n_threads = std::max(1, std::min(jobs, total));
        std::vector<std::jthread> pool;
        for (int t = 1; t < n_threads; ++t)
            pool.emplace_back(worker);
        worker();
        return out;
    }

    RayleighResult rayleigh_distance(const RayleighCase &rc)
    {
        const double th = rc.incidence_deg * kPi / 180.0;
        Surface surf;
        surf.normal = Vec3d::UnitZ();
        surf.u1 = Vec3d::UnitX();
        surf.u2 = Vec3d::UnitY();
        surf.kappa1 = rc.surface_curvature;
        surf.kappa2 = 0.0;

        Wavefront w;
        w.direction = Vec3d(std::sin(th), 0.0, -std::cos(th));
        w.x1 = Vec3d(std::cos(th), 0.0, std::sin(th));
        w.x2 = Vec3d::UnitY();
        w.curvature = rc.incident_curvature * Mat2d::Identity();
        const Wavefront refl = reflect_wavefront(w, surf, 89.0 * kPi / 180.0);

        // Broadside array whose axes follow the reflected tangent basis
        auto mu_at = [&](double s) {
            const Wavefront ws = s > 0.0 ? propagate_wavefront(refl, s) : refl;
            return mu_star(ws.curvature, Mat2d::Identity(), rc.n, rc.n, rc.d_ant, rc.wavelength).mu_star;
        };

        RayleighResult res;
        Eigen::SelfAdjointEigenSolver<Mat2d> es;
        es.computeDirect(refl.curvature, Eigen::EigenvaluesOnly);
        res.q1 = es.eigenvalues()(1);
        res.q2 = es.eigenvalues()(0);

        if (mu_at(0.0) <= rc.target_mu)
        {
            res.distance = 0.0;
            res.mu_at_distance = mu_at(0.0);
            res.bound_at_distance = similarity_bound(res.mu_at_distance);
            return res;
        }
        if (mu_at(rc.s_max) > rc.target_mu)
            throw Error(Errc::no_solution, "anisotropy stays above the target within the search range");

        double lo = 0.0, hi = rc.s_max;
        for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (mu_at(mid) > rc.target_mu ? lo : hi) = mid;
        }
        res.distance = hi;
        res.mu_at_distance = mu_at(hi);
        res.bound_at_distance = similarity_bound(res.mu_at_distance);
        return res;
    }
}
