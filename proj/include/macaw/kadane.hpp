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

#ifndef MACAW_KADANE_HPP
#define MACAW_KADANE_HPP

#include <cstddef>
#include <span>

namespace macaw
{
    struct Subarray
    {
        std::size_t begin = 0;  // First index (may wrap for circular results)
        std::size_t length = 0; // Number of elements, 0 if the input is empty
        double sum = 0.0;
    };

    // Maximum-sum contiguous run (Kadane). Ties keep the earliest, shortest run.
    // For all-negative input the single largest element is returned.
    inline Subarray max_subarray(std::span<const double> x)
    {
        Subarray best;
        if (x.empty())
            return best;
        best = {0, 1, x[0]};
        double run = x[0];
        std::size_t run_begin = 0;
        for (std::size_t i = 1; i < x.size(); ++i)
        {
            if (run < 0.0)
            {
                run = x[i];
                run_begin = i;
            }
            else
                run += x[i];
            if (run > best.sum)
                best = {run_begin, i - run_begin + 1, run};
        }
        return best;
    }

    // Maximum-sum run on a ring: either a plain run or the complement of the minimum run.
    // Used on DFT bins where the spectrum wraps at the Nyquist edge.
    inline Subarray max_circular_subarray(std::span<const double> x)
    {
        const Subarray straight = max_subarray(x);
        if (x.size() < 2 || straight.sum < 0.0)
            return straight;

        double total = 0.0;
        for (double v : x)
            total += v;

        // Minimum run via Kadane on the negated sequence, restricted to a proper sub-run
        Subarray worst{0, 1, x[0]};
        double run = x[0];
        std::size_t run_begin = 0;
        for (std::size_t i = 1; i < x.size(); ++i)
        {
            if (run > 0.0)
            {
                run = x[i];
                run_begin = i;
            }
            else
                run += x[i];
            if (run < worst.sum)
                worst = {run_begin, i - run_begin + 1, run};
        }
        if (worst.length == x.size())
            return straight;

        const double wrapped = total - worst.sum;
        if (wrapped > straight.sum)
            return {(worst.begin + worst.length) % x.size(), x.size() - worst.length, wrapped};
        return straight;
    }
}

#endif
