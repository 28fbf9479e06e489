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

#include "macaw/harness/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <memory>
#include <stdexcept>

namespace macaw::harness
{
    std::string git_blob_sha1(std::string_view content)
    {
        const std::string header = "blob " + std::to_string(content.size()) + '\0';
        std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
        unsigned char digest[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
            EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
            EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1 ||
            EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
            throw std::runtime_error("SHA-1 digest failed");
        std::string hex;
        char buf[3];
        for (unsigned int i = 0; i < len; ++i)
        {
            std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
            hex += buf;
        }
        return hex;
    }

    RunManifest make_manifest(const std::string &command, std::vector<std::string> args, Json config)
    {
        RunManifest m;
        m.command = command;
        m.args = std::move(args);
        m.config = std::move(config);
        m.input_hash = git_blob_sha1(m.config.dump());
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm utc{};
        gmtime_r(&now, &utc);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
        m.timestamp = buf;
        return m;
    }

    Json to_json(const RunManifest &m)
    {
        Json j;
        j["format"] = "macaw-manifest/1";
        j["tool"] = "macaw";
        j["tool_version"] = m.tool_version;
        j["timestamp"] = m.timestamp;
        j["command"] = m.command;
        j["args"] = m.args;
        j["input_hash"] = m.input_hash;
        j["config"] = m.config;
        j["outputs"] = Json::array();
        for (const auto &o : m.outputs)
            j["outputs"].push_back({{"file", o.file}, {"blob_sha1", o.blob_sha1}, {"content_sha1", o.content_sha1}});
        return j;
    }

    std::filesystem::path manifest_path(const std::filesystem::path &out)
    {
        return std::filesystem::path(out.string() + ".manifest.json");
    }
}
