// SPDX-License-Identifier: Apache-2.0
//
// rfgan: indoor RF coverage synthesis with conditional GANs and image-method ray tracing
// Copyright (C) 2026 The rfgan authors
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

#include "rfgan/io.hpp"

#include "rfgan/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>

namespace rfgan::io {

namespace {

template <typename U>
void put_le(std::vector<std::uint8_t>& buf, U v)
{
    for (std::size_t i = 0; i < sizeof(U); ++i)
        buf.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFFu));
}

} // namespace

void ByteWriter::bytes(std::string_view s)
{
    buf_.insert(buf_.end(), s.begin(), s.end());
}

void ByteWriter::u32(std::uint32_t v) { put_le(buf_, v); }
void ByteWriter::u64(std::uint64_t v) { put_le(buf_, v); }
void ByteWriter::f32(float v) { put_le(buf_, std::bit_cast<std::uint32_t>(v)); }
void ByteWriter::f64(double v) { put_le(buf_, std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::f32s(std::span<const float> v)
{
    buf_.reserve(buf_.size() + 4 * v.size());
    for (float x : v)
        f32(x);
}

void ByteWriter::str(std::string_view s)
{
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s);
}

void ByteReader::need(std::size_t n) const
{
    if (pos_ + n > data_.size())
        throw DataError("truncated input: need " + std::to_string(n) + " bytes at offset " + std::to_string(pos_));
}

void ByteReader::seek(std::size_t p)
{
    if (p > data_.size())
        throw DataError("seek past end of input");
    pos_ = p;
}

std::string ByteReader::bytes(std::size_t n)
{
    need(n);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
    pos_ += n;
    return s;
}

std::uint32_t ByteReader::u32()
{
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
}

std::uint64_t ByteReader::u64()
{
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
}

float ByteReader::f32() { return std::bit_cast<float>(u32()); }
double ByteReader::f64() { return std::bit_cast<double>(u64()); }

void ByteReader::f32s(std::span<float> out)
{
    need(4 * out.size());
    for (float& x : out)
        x = f32();
}

std::string ByteReader::str()
{
    const auto n = u32();
    return bytes(n);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& p, std::span<const std::uint8_t> data)
{
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot write " + p.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw DataError("write failed: " + p.string());
}

std::string read_text(const std::filesystem::path& p)
{
    std::ifstream in(p);
    if (!in)
        throw DataError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& p, std::string_view text)
{
    write_file(p, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::uint64_t fnv1a(std::span<const std::uint8_t> data, std::uint64_t seed)
{
    std::uint64_t h = seed;
    for (auto b : data) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a(std::string_view s)
{
    return fnv1a({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

std::string hex64(std::uint64_t v)
{
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

unsigned worker_count()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("RADIANCE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            return std::min(hw, static_cast<unsigned>(v));
    }
    return hw;
}

} // namespace rfgan::io
