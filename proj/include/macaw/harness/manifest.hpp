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

#ifndef MACAW_HARNESS_MANIFEST_HPP
#define MACAW_HARNESS_MANIFEST_HPP

#include "macaw/harness/serialize.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace macaw::harness
{
    inline constexpr const char *kToolVersion = "0.1.0";

    // Git object id of a blob with this content (SHA-1 over "blob <size>\0" + content)
    std::string git_blob_sha1(std::string_view content);

    struct OutputRecord
    {
        std::string file;
        std::string blob_sha1;    // Whole file
        std::string content_sha1; // Deterministic part only (timings stripped)
    };

    struct RunManifest
    {
        std::string command;
        std::vector<std::string> args;
        Json config;
        std::string input_hash; // git_blob_sha1 of the canonical config dump
        std::string tool_version = kToolVersion;
        std::string timestamp;  // UTC, ISO 8601
        std::vector<OutputRecord> outputs;
    };

    RunManifest make_manifest(const std::string &command, std::vector<std::string> args, Json config);
    Json to_json(const RunManifest &m);

    // <out>.manifest.json next to the primary output
    std::filesystem::path manifest_path(const std::filesystem::path &out);
}

#endif
