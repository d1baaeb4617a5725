// SPDX-License-Identifier: Apache-2.0
//
// tempofade - temporal multipath fading simulator and link analysis toolkit
// Copyright (C) 2026 the tempofade authors
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

#include "tempofade/trace_file.hpp"

#include "tempofade/errors.hpp"

#include <bit>
#include <cstring>

static_assert(std::endian::native == std::endian::little,
              "IQTF I/O assumes a little-endian host");

namespace tempofade {

namespace {

constexpr char iqtf_magic[4] = {'I', 'Q', 'T', 'F'};
constexpr std::size_t header_bytes = 4 + 2 + 8 + 8 + 8 + 8;

template <typename T> void put(unsigned char *&p, const T &v) {
    std::memcpy(p, &v, sizeof(T));
    p += sizeof(T);
}

template <typename T> void get(const unsigned char *&p, T &v) {
    std::memcpy(&v, p, sizeof(T));
    p += sizeof(T);
}

} // namespace

TraceFileWriter::TraceFileWriter(const std::filesystem::path &path, const TraceHeader &header)
    : path_(path), declared_(header.sample_count) {
    file_ = std::fopen(path.string().c_str(), "wb");
    if (!file_)
        throw IoError("cannot open trace for writing: " + path.string());

    unsigned char buf[header_bytes];
    unsigned char *p = buf;
    std::memcpy(p, iqtf_magic, 4);
    p += 4;
    put(p, iqtf_version);
    put(p, header.carrier_hz);
    put(p, header.sample_rate_hz);
    put(p, header.norm_mw);
    put(p, header.sample_count);
    if (std::fwrite(buf, 1, header_bytes, file_) != header_bytes) {
        std::fclose(file_);
        file_ = nullptr;
        throw IoError("failed writing trace header: " + path.string());
    }
}

TraceFileWriter::~TraceFileWriter() {
    if (file_)
        std::fclose(file_);
}

void TraceFileWriter::write(std::span<const std::complex<float>> samples) {
    if (!file_)
        throw IoError("trace writer already closed: " + path_.string());
    if (!samples.empty() &&
        std::fwrite(samples.data(), sizeof(std::complex<float>), samples.size(), file_) !=
            samples.size())
        throw IoError("failed writing trace samples: " + path_.string());
    written_ += samples.size();
}

void TraceFileWriter::close() {
    if (!file_)
        return;
    const int rc = std::fclose(file_);
    file_ = nullptr;
    if (rc != 0)
        throw IoError("failed closing trace: " + path_.string());
    if (written_ != declared_)
        throw IoError("trace sample count mismatch in " + path_.string() + ": declared " +
                      std::to_string(declared_) + ", wrote " + std::to_string(written_));
}

TraceFileReader::TraceFileReader(const std::filesystem::path &path) : path_(path) {
    file_ = std::fopen(path.string().c_str(), "rb");
    if (!file_)
        throw IoError("cannot open trace: " + path.string());

    unsigned char buf[header_bytes];
    if (std::fread(buf, 1, header_bytes, file_) != header_bytes) {
        std::fclose(file_);
        file_ = nullptr;
        throw IoError("truncated trace header: " + path.string());
    }
    const unsigned char *p = buf;
    if (std::memcmp(p, iqtf_magic, 4) != 0) {
        std::fclose(file_);
        file_ = nullptr;
        throw IoError("not an IQTF trace: " + path.string());
    }
    p += 4;
    std::uint16_t version = 0;
    get(p, version);
    if (version != iqtf_version) {
        std::fclose(file_);
        file_ = nullptr;
        throw IoError("unsupported IQTF version " + std::to_string(version) + " in " +
                      path.string());
    }
    get(p, header_.carrier_hz);
    get(p, header_.sample_rate_hz);
    get(p, header_.norm_mw);
    get(p, header_.sample_count);

    // validate the payload length up front so short files fail loudly
    std::fseek(file_, 0, SEEK_END);
    const long size = std::ftell(file_);
    std::fseek(file_, static_cast<long>(header_bytes), SEEK_SET);
    const std::uint64_t expected =
        header_bytes + header_.sample_count * sizeof(std::complex<float>);
    if (size < 0 || static_cast<std::uint64_t>(size) != expected) {
        std::fclose(file_);
        file_ = nullptr;
        throw IoError("trace payload truncated or oversized: " + path.string());
    }
}

TraceFileReader::~TraceFileReader() {
    if (file_)
        std::fclose(file_);
}

std::size_t TraceFileReader::read(std::span<std::complex<float>> out) {
    if (!file_)
        throw IoError("trace reader already closed: " + path_.string());
    if (out.empty())
        return 0;
    return std::fread(out.data(), sizeof(std::complex<float>), out.size(), file_);
}

void TraceFileReader::rewind() {
    if (std::fseek(file_, static_cast<long>(header_bytes), SEEK_SET) != 0)
        throw IoError("seek failed on trace: " + path_.string());
}

void write_trace(const std::filesystem::path &path, const IQTrace &trace) {
    TraceHeader header{trace.carrier_hz, trace.sample_rate_hz, trace.norm_mw,
                       trace.samples.size()};
    TraceFileWriter writer(path, header);
    writer.write(trace.samples);
    writer.close();
}

IQTrace read_trace(const std::filesystem::path &path) {
    TraceFileReader reader(path);
    IQTrace trace;
    trace.carrier_hz = reader.header().carrier_hz;
    trace.sample_rate_hz = reader.header().sample_rate_hz;
    trace.norm_mw = reader.header().norm_mw;
    trace.samples.resize(reader.header().sample_count);
    if (reader.read(trace.samples) != trace.samples.size())
        throw IoError("short read on trace payload: " + path.string());
    return trace;
}

} // namespace tempofade
