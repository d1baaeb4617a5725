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

#include "tempofade/channel.hpp"
#include "tempofade/scenario.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace tempofade {

/// Normalized complex baseband capture. norm_mw is the calibration factor
/// that turns I^2+Q^2 into milliwatts.
struct IQTrace {
    double carrier_hz = 915e6;
    double sample_rate_hz = 1e6;
    double norm_mw = 1e-4;
    double start_time_s = 0.0;
    std::vector<std::complex<float>> samples;
};

/// A fixed-length slice of a trace (default 5 ms). Views into the parent
/// trace; the trace must outlive the frame.
struct Frame {
    std::size_t index = 0;
    double start_time_s = 0.0;
    double sample_rate_hz = 1e6;
    std::span<const std::complex<float>> samples;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

struct WaveformConfig {
    double sample_rate_hz = 1e6;
    double frame_s = 5e-3;
    double norm_mw = 1e-4;
    double noise_power_mw = 1e-8;
    std::uint64_t bit_seed = 20201;
    std::uint64_t noise_seed = 31327;
    /// Update the specular gain per sample instead of per frame. Costly;
    /// meant for short sensitivity traces.
    bool per_sample_gain = false;

    void validate() const;
    std::size_t frame_len() const;
};

/// Unit-power QPSK symbols, uniform over {(+-1 +- i)/sqrt(2)}, deterministic in seed.
std::vector<std::complex<double>> gen_qpsk(std::uint64_t seed, std::size_t n_symbols);

/// Elementwise complex product (flat fading, one gain per sample).
std::vector<std::complex<double>> apply_channel(std::span<const std::complex<double>> symbols,
                                                std::span<const ComplexGain> gains);

/// Adds circular complex Gaussian noise with E[|n|^2] = noise_power (in the
/// samples' own power units), deterministic in seed.
std::vector<std::complex<double>> add_awgn(std::span<const std::complex<double>> samples,
                                           double noise_power, std::uint64_t seed);

/// Per-sample power in dBm; exact zeros map to -inf.
std::vector<double> envelope_dbm(const IQTrace &trace);

/// Front-end style RSSI: mean power over the first 16 us of the frame,
/// converted to dBm and rounded to the nearest integer.
int rssi_estimate(const Frame &frame, double norm_mw);

/// Per-frame data handed to streaming consumers during link simulation.
struct FrameRecord {
    std::size_t index = 0;
    double start_time_s = 0.0;
    double s_inst = 0.0;
    double sigma_inst = 0.0;
    ComplexGain specular_gain;
    std::span<const std::complex<float>> samples;
};

class FrameSink {
  public:
    virtual ~FrameSink() = default;
    virtual void on_frame(const FrameRecord &rec) = 0;
};

/// End-to-end link simulation, one frame at a time. Within each frame the
/// applied specular gain is exactly constant; the scattered field is realized
/// per sample as a circular Gaussian with the scene's instantaneous scattered
/// power, and thermal noise is added on top. Deterministic in
/// (scenario, waveform config).
void run_link_simulation(const Scenario &sc, const WaveformConfig &cfg, double duration_s,
                         FrameSink &sink);

/// Same simulation collected into an in-memory trace (duration from the scenario).
IQTrace simulate_link(const Scenario &sc, const WaveformConfig &cfg);

/// Fast Rician fading stress trace: the complex gain is a coherent term plus a
/// sum of Doppler-shifted sinusoids, updated every sample. Used to emulate a
/// mobile-grade channel that defeats windowed RSSI estimation.
struct FastRicianConfig {
    double c0 = 1.0;
    double sigma = 0.5;
    double doppler_hz = 500.0;
    int n_sinusoids = 16;
    double duration_s = 2.0;
    std::uint64_t phase_seed = 77;
};

IQTrace simulate_fast_rician(const FastRicianConfig &fast, const WaveformConfig &cfg);

} // namespace tempofade
