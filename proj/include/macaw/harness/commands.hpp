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

#ifndef MACAW_HARNESS_COMMANDS_HPP
#define MACAW_HARNESS_COMMANDS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace macaw::harness
{
    enum ExitCode : int
    {
        kExitOk = 0,
        kExitValidation = 1,
        kExitRuntime = 2,
        kExitIo = 3,
    };

    // Subcommands: scenario | estimate | sweep | table2 | bound | rayleigh.
    // `args` excludes the program name. Results go to --out or, without it, to `out`.
    int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
}

#endif
