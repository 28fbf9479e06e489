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

#ifndef MACAW_HARNESS_BINARY_IO_HPP
#define MACAW_HARNESS_BINARY_IO_HPP

#include "macaw/common.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace macaw::harness
{
    // File-system and format failures (CLI exit code 3)
    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Malformed or inconsistent user input (CLI exit code 1)
    class ValidationError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Complex array in the MACAWBIN container:
    // "MACAWBIN", u32 version, u32 ndims, u64 dims[ndims], then little-endian float64 (re, im) pairs, row-major
    struct BinaryArray
    {
        std::vector<std::uint64_t> dims;
        std::vector<cdouble> data;
    };

    inline constexpr std::uint32_t kBinaryVersion = 1;

    std::string encode_binary(const BinaryArray &a);
    BinaryArray decode_binary(const std::string &bytes);

    void write_binary(const std::filesystem::path &path, const BinaryArray &a);
    BinaryArray read_binary(const std::filesystem::path &path);

    BinaryArray to_binary(const CMatrix &m);
    CMatrix matrix_from_binary(const BinaryArray &a);

    std::string read_file(const std::filesystem::path &path);
    void write_file(const std::filesystem::path &path, const std::string &content);
}

#endif
