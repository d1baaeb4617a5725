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

#pragma once

#include "tempofade/signal.hpp"

#include <cstdio>
#include <filesystem>
#include <memory>
#include <span>

namespace tempofade {

// IQTF binary trace format, little-endian:
//   magic "IQTF" (4 bytes), version u16, carrier_hz f64, sample_rate_hz f64,
//   norm_mw f64, sample_count u64, then sample_count interleaved (f32 I, f32 Q).

inline constexpr std::uint16_t iqtf_version = 1;

struct TraceHeader {
    double carrier_hz = 0.0;
    double sample_rate_hz = 0.0;
    double norm_mw = 0.0;
    std::uint64_t sample_count = 0;
};

/// Streaming writer; the sample count is declared up front and enforced at close().
class TraceFileWriter {
  public:
    TraceFileWriter(const std::filesystem::path &path, const TraceHeader &header);
    ~TraceFileWriter();
    TraceFileWriter(const TraceFileWriter &) = delete;
    TraceFileWriter &operator=(const TraceFileWriter &) = delete;

    void write(std::span<const std::complex<float>> samples);
    void close();

  private:
    std::filesystem::path path_;
    std::FILE *file_ = nullptr;
    std::uint64_t declared_ = 0;
    std::uint64_t written_ = 0;
};

/// Streaming reader with header validation.
class TraceFileReader {
  public:
    explicit TraceFileReader(const std::filesystem::path &path);
    ~TraceFileReader();
    TraceFileReader(const TraceFileReader &) = delete;
    TraceFileReader &operator=(const TraceFileReader &) = delete;

    const TraceHeader &header() const { return header_; }

    /// Reads up to out.size() samples; returns the number read.
    std::size_t read(std::span<std::complex<float>> out);

    /// Seeks back to the first sample.
    void rewind();

  private:
    std::filesystem::path path_;
    std::FILE *file_ = nullptr;
    TraceHeader header_;
};

void write_trace(const std::filesystem::path &path, const IQTrace &trace);
IQTrace read_trace(const std::filesystem::path &path);

} // namespace tempofade
