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

#include "macaw/harness/binary_io.hpp"

#include <bit>
#include <fstream>
#include <sstream>

namespace macaw::harness
{
    namespace
    {
        constexpr char kMagic[8] = {'M', 'A', 'C', 'A', 'W', 'B', 'I', 'N'};

        template <typename U>
        void put_le(std::string &out, U v)
        {
            for (std::size_t i = 0; i < sizeof(U); ++i)
                out.push_back(char((v >> (8 * i)) & 0xFF));
        }

        template <typename U>
        U get_le(const std::string &in, std::size_t &pos)
        {
            if (pos + sizeof(U) > in.size())
                throw IoError("MACAWBIN: truncated data");
            U v = 0;
            for (std::size_t i = 0; i < sizeof(U); ++i)
                v |= U(static_cast<unsigned char>(in[pos + i])) << (8 * i);
            pos += sizeof(U);
            return v;
        }
    }

    std::string encode_binary(const BinaryArray &a)
    {
        std::uint64_t count = 1;
        for (auto d : a.dims)
            count *= d;
        if (count != a.data.size())
            throw ValidationError("MACAWBIN: dimensions do not match the element count");
        std::string out(kMagic, sizeof(kMagic));
        put_le(out, kBinaryVersion);
        put_le(out, std::uint32_t(a.dims.size()));
        for (auto d : a.dims)
            put_le(out, d);
        out.reserve(out.size() + 16 * a.data.size());
        for (const cdouble &z : a.data)
        {
            put_le(out, std::bit_cast<std::uint64_t>(z.real()));
            put_le(out, std::bit_cast<std::uint64_t>(z.imag()));
        }
        return out;
    }

    BinaryArray decode_binary(const std::string &bytes)
    {
        if (bytes.size() < sizeof(kMagic) || bytes.compare(0, sizeof(kMagic), std::string(kMagic, sizeof(kMagic))) != 0)
            throw IoError("MACAWBIN: bad magic");
        std::size_t pos = sizeof(kMagic);
        const auto version = get_le<std::uint32_t>(bytes, pos);
        if (version != kBinaryVersion)
            throw IoError("MACAWBIN: unsupported version " + std::to_string(version));
        const auto ndims = get_le<std::uint32_t>(bytes, pos);
        BinaryArray a;
        std::uint64_t count = 1;
        for (std::uint32_t i = 0; i < ndims; ++i)
        {
            a.dims.push_back(get_le<std::uint64_t>(bytes, pos));
            count *= a.dims.back();
        }
        if (bytes.size() - pos != 16 * count)
            throw IoError("MACAWBIN: payload size does not match the dimensions");
        a.data.resize(count);
        for (auto &z : a.data)
        {
            const double re = std::bit_cast<double>(get_le<std::uint64_t>(bytes, pos));
            const double im = std::bit_cast<double>(get_le<std::uint64_t>(bytes, pos));
            z = {re, im};
        }
        return a;
    }

    void write_binary(const std::filesystem::path &path, const BinaryArray &a)
    {
        write_file(path, encode_binary(a));
    }

    BinaryArray read_binary(const std::filesystem::path &path)
    {
        return decode_binary(read_file(path));
    }

    BinaryArray to_binary(const CMatrix &m)
    {
        BinaryArray a;
        a.dims = {std::uint64_t(m.rows()), std::uint64_t(m.cols())};
        a.data.reserve(std::size_t(m.size()));
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                a.data.push_back(m(r, c));
        return a;
    }

    CMatrix matrix_from_binary(const BinaryArray &a)
    {
        if (a.dims.size() != 2)
            throw ValidationError("MACAWBIN: expected a 2-D array");
        CMatrix m(Eigen::Index(a.dims[0]), Eigen::Index(a.dims[1]));
        std::size_t i = 0;
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                m(r, c) = a.data[i++];
        return m;
    }

    std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        if (in.bad())
            throw IoError("read failed: " + path.string());
        return ss.str();
    }

    void write_file(const std::filesystem::path &path, const std::string &content)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot create " + path.string());
        out.write(content.data(), std::streamsize(content.size()));
        if (!out)
            throw IoError("write failed: " + path.string());
    }
}
