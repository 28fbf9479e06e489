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

#ifndef MACAW_HARNESS_EXPERIMENTS_HPP
#define MACAW_HARNESS_EXPERIMENTS_HPP

#include "macaw/estimator.hpp"
#include "macaw/scenario.hpp"
#include "macaw/swc_similarity.hpp"

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace macaw::harness
{
    // Seed plumbing: one independent stream per trial, then per purpose
    std::uint64_t trial_seed(std::uint64_t seed, int trial);
    std::uint64_t operator_seed(std::uint64_t trial_seed);
    std::uint64_t noise_seed(std::uint64_t trial_seed, double snr_db);

    // SRFT with one block of N_RF rows per pilot symbol
    std::shared_ptr<const SketchOperator> make_operator(const ScenarioConfig &c, std::uint64_t seed);

    // Known model order and the scenario's r_min on top of `base`
    EstimatorConfig estimator_for(const Scenario &sc, EstimatorConfig base = {});

    struct TrialOutcome
    {
        double nmse = 1.0;
        StageTimings timings;
        EstimateResult result;
        std::string error;
    };

    // snr_db = +inf runs noiseless
    TrialOutcome run_macaw(const Scenario &sc, double snr_db, std::uint64_t trial_seed, const EstimatorConfig &cfg);

    // Per-path best spherical fit of the true steering, then a joint least-squares gain fit to the true channel
    CMatrix swc_fitting_channel(const Scenario &sc, const SwcFitGrid &grid = {});

    // Runs f(i) for i in [0, n) on up to `jobs` threads; rethrows the first failure
    template <typename F>
    void parallel_for(int n, int jobs, F &&f)
    {
        jobs = std::max(1, std::min(jobs, n));
        if (jobs == 1)
        {
            for (int i = 0; i < n; ++i)
                f(i);
            return;
        }
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex mu;
        {
            std::vector<std::jthread> pool;
            for (int t = 0; t < jobs; ++t)
                pool.emplace_back([&] {
                    for (int i = next++; i < n; i = next++)
                    {
                        try
                        {
                            f(i);
                        }
                        catch (...)
                        {
                            std::lock_guard lock(mu);
                            if (!failure)
                                failure = std::current_exception();
                        }
                    }
                });
        }
        if (failure)
            std::rethrow_exception(failure);
    }

    struct SweepOptions
    {
        ScenarioConfig base = table1_defaults();
        EstimatorConfig estimator;
        std::vector<double> snrs{-20, -15, -10, -5, 0, 5, 10};
        int trials = 100;
        std::uint64_t seed = 1;
        int jobs = 1;
        bool swc_mode = false; // Flat reflectors, so every path is a spherical wave
    };

    struct SweepRow
    {
        std::string label;
        double snr_db = 0.0;
        int trial = 0;
        std::uint64_t seed = 0;
        double nmse = 0.0;
        StageTimings timings;
        std::string error;
    };

    struct Summary
    {
        std::string label;
        std::string method;
        double snr_db = 0.0;
        int count = 0;
        double mean = 0.0;
        double median = 0.0;
    };

    // Every trial draws one scenario and reuses it across the SNR list. Rows are ordered by (snr, trial).
    std::vector<SweepRow> run_sweep(const SweepOptions &opt);
    std::vector<Summary> summarize_sweep(const std::vector<SweepRow> &rows);
    std::string sweep_csv(const std::vector<SweepRow> &rows, bool with_timings = true);

    struct Table2Options
    {
        int exp = 1;
        int trials = 10;
        double snr_db = 10.0;
        std::uint64_t seed = 1;
        int jobs = 1;
        EstimatorConfig estimator;
        SwcFitGrid grid;
    };

    struct Table2Row
    {
        int exp = 0;
        std::string label;
        std::string method; // "macaw" or "swc_fitting"
        int trial = 0;
        std::uint64_t seed = 0;
        double nmse = 0.0;
        double seconds = 0.0;
        std::string error;
    };

    // Rows ordered by (config, trial, method)
    std::vector<Table2Row> run_table2(const Table2Options &opt);
    std::vector<Summary> summarize_table2(const std::vector<Table2Row> &rows);
    std::string table2_csv(const std::vector<Table2Row> &rows, bool with_timings = true);

    std::string bound_csv(const std::vector<BoundSample> &rows);

    double median(std::vector<double> v);
}

#endif
