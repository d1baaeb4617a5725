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

#include "tempofade/signal.hpp"

#include "tempofade/errors.hpp"
#include "tempofade/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tempofade {

namespace {

constexpr double rssi_window_s = 16e-6;
constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;

const std::complex<double> qpsk_map[4] = {{inv_sqrt2, inv_sqrt2},
                                          {-inv_sqrt2, inv_sqrt2},
                                          {inv_sqrt2, -inv_sqrt2},
                                          {-inv_sqrt2, -inv_sqrt2}};

void fill_qpsk(Rng &rng, std::span<std::complex<double>> out) {
    for (auto &s : out)
        s = qpsk_map[rng.bits() & 3u];
}

} // namespace

void WaveformConfig::validate() const {
    if (!(sample_rate_hz > 0.0))
        throw ValidationError("waveform.sample_rate_hz must be positive");
    if (!(frame_s > 0.0))
        throw ValidationError("waveform.frame_s must be positive");
    if (!(norm_mw > 0.0))
        throw ValidationError("waveform.norm_mw must be positive");
    if (noise_power_mw < 0.0)
        throw ValidationError("waveform.noise_power_mw must be >= 0");
    if (frame_len() == 0)
        throw ValidationError("waveform.frame_s too short for the sample rate");
}

std::size_t WaveformConfig::frame_len() const {
    return static_cast<std::size_t>(std::llround(sample_rate_hz * frame_s));
}

std::vector<std::complex<double>> gen_qpsk(std::uint64_t seed, std::size_t n_symbols) {
    if (n_symbols < 1)
        throw ValidationError("gen_qpsk: n_symbols must be >= 1");
    std::vector<std::complex<double>> out(n_symbols);
    Rng rng(seed);
    fill_qpsk(rng, out);
    return out;
}

std::vector<std::complex<double>> apply_channel(std::span<const std::complex<double>> symbols,
                                                std::span<const ComplexGain> gains) {
    if (symbols.size() != gains.size())
        throw ValidationError("apply_channel: symbol and gain lengths differ");
    std::vector<std::complex<double>> out(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i)
        out[i] = symbols[i] * gains[i];
    return out;
}

std::vector<std::complex<double>> add_awgn(std::span<const std::complex<double>> samples,
                                           double noise_power, std::uint64_t seed) {
    if (noise_power < 0.0)
        throw ValidationError("add_awgn: noise_power must be >= 0");
    std::vector<std::complex<double>> out(samples.begin(), samples.end());
    if (noise_power == 0.0)
        return out;
    Rng rng(seed);
    for (auto &s : out)
        s += rng.circular_gaussian(noise_power);
    return out;
}

std::vector<double> envelope_dbm(const IQTrace &trace) {
    std::vector<double> out(trace.samples.size());
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        const double p = trace.norm_mw * std::norm(std::complex<double>(trace.samples[i]));
        out[i] = p > 0.0 ? 10.0 * std::log10(p) : -std::numeric_limits<double>::infinity();
    }
    return out;
}

int rssi_estimate(const Frame &frame, double norm_mw) {
    const std::size_t n_win =
        static_cast<std::size_t>(std::llround(frame.sample_rate_hz * rssi_window_s));
    if (n_win == 0 || frame.samples.size() < n_win)
        throw AnalysisError("rssi_estimate: frame shorter than the 16 us estimation window");
    double acc = 0.0;
    for (std::size_t i = 0; i < n_win; ++i)
        acc += std::norm(std::complex<double>(frame.samples[i]));
    const double mean_mw = norm_mw * acc / static_cast<double>(n_win);
    if (mean_mw <= 0.0)
        throw AnalysisError("rssi_estimate: zero power in the estimation window");
    return static_cast<int>(std::lround(10.0 * std::log10(mean_mw)));
}

void run_link_simulation(const Scenario &sc, const WaveformConfig &cfg, double duration_s,
                         FrameSink &sink) {
    sc.validate();
    cfg.validate();
    if (!(duration_s > 0.0) || duration_s > sc.duration_s)
        throw ValidationError("simulation duration must be in (0, scenario.duration_s]");

    const std::size_t frame_len = cfg.frame_len();
    const std::size_t n_frames =
        static_cast<std::size_t>(std::llround(duration_s / cfg.frame_s));
    if (n_frames == 0)
        throw ValidationError("simulation duration shorter than one frame");

    // Independent streams; their draw order per frame is fixed, so the trace
    // is bit-reproducible.
    Rng bits(cfg.bit_seed);
    Rng noise(cfg.noise_seed);
    Rng scatter(derive_seed(cfg.noise_seed, 1));
    const double noise_var = cfg.noise_power_mw / cfg.norm_mw;
    const double dt = 1.0 / cfg.sample_rate_hz;

    std::vector<std::complex<double>> symbols(frame_len);
    std::vector<std::complex<float>> frame_out(frame_len);

    for (std::size_t f = 0; f < n_frames; ++f) {
        const double t0 = static_cast<double>(f) * cfg.frame_s;
        const SceneState scene = resolve_scene(sc, t0);
        const SpecularScattered power = specular_scattered_power(scene, sc.carrier_hz);
        const ComplexGain gain = specular_gain(scene, sc.carrier_hz);
        const double scattered_var = 2.0 * power.sigma_inst * power.sigma_inst;

        fill_qpsk(bits, symbols);
        for (std::size_t i = 0; i < frame_len; ++i) {
            ComplexGain g = gain;
            if (cfg.per_sample_gain && i > 0)
                g = specular_gain(resolve_scene(sc, std::min(t0 + static_cast<double>(i) * dt,
                                                             sc.duration_s)),
                                  sc.carrier_hz);
            std::complex<double> y = symbols[i] * g;
            if (scattered_var > 0.0)
                y += scatter.circular_gaussian(scattered_var);
            if (noise_var > 0.0)
                y += noise.circular_gaussian(noise_var);
            frame_out[i] = std::complex<float>(y);
        }

        FrameRecord rec;
        rec.index = f;
        rec.start_time_s = t0;
        rec.s_inst = power.s_inst;
        rec.sigma_inst = power.sigma_inst;
        rec.specular_gain = gain;
        rec.samples = frame_out;
        sink.on_frame(rec);
    }
}

namespace {

class TraceCollector : public FrameSink {
  public:
    explicit TraceCollector(IQTrace &trace) : trace_(trace) {}
    void on_frame(const FrameRecord &rec) override {
        trace_.samples.insert(trace_.samples.end(), rec.samples.begin(), rec.samples.end());
    }

  private:
    IQTrace &trace_;
};

} // namespace

IQTrace simulate_link(const Scenario &sc, const WaveformConfig &cfg) {
    IQTrace trace;
    trace.carrier_hz = sc.carrier_hz;
    trace.sample_rate_hz = cfg.sample_rate_hz;
    trace.norm_mw = cfg.norm_mw;
    TraceCollector sink(trace);
    run_link_simulation(sc, cfg, sc.duration_s, sink);
    return trace;
}

IQTrace simulate_fast_rician(const FastRicianConfig &fast, const WaveformConfig &cfg) {
    cfg.validate();
    if (fast.n_sinusoids < 1)
        throw ValidationError("fast_rician.n_sinusoids must be >= 1");
    if (!(fast.duration_s > 0.0))
        throw ValidationError("fast_rician.duration_s must be positive");
    if (fast.c0 < 0.0 || fast.sigma < 0.0)
        throw ValidationError("fast_rician.c0 and sigma must be >= 0");

    const std::size_t n =
        static_cast<std::size_t>(std::llround(fast.duration_s * cfg.sample_rate_hz));
    Rng phases(fast.phase_seed);
    Rng bits(cfg.bit_seed);
    Rng noise(cfg.noise_seed);

    // Equal-power sinusoids at Doppler shifts f_D cos(alpha_m); total scattered
    // power 2 sigma^2.
    const int m = fast.n_sinusoids;
    std::vector<double> omega(m), psi(m);
    const double amp = fast.sigma * std::sqrt(2.0 / static_cast<double>(m));
    for (int k = 0; k < m; ++k) {
        omega[k] = 2.0 * std::numbers::pi * fast.doppler_hz * std::cos(phases.angle());
        psi[k] = phases.angle();
    }
    const double phi0 = phases.angle();

    IQTrace trace;
    trace.carrier_hz = 915e6; // nominal; the emulated channel does not use it
    trace.sample_rate_hz = cfg.sample_rate_hz;
    trace.norm_mw = cfg.norm_mw;
    trace.samples.resize(n);

    const double noise_var = cfg.noise_power_mw / cfg.norm_mw;
    const double dt = 1.0 / cfg.sample_rate_hz;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        std::complex<double> g = std::polar(fast.c0, phi0);
        for (int k = 0; k < m; ++k)
            g += std::polar(amp, omega[k] * t + psi[k]);
        std::complex<double> y = qpsk_map[bits.bits() & 3u] * g;
        if (noise_var > 0.0)
            y += noise.circular_gaussian(noise_var);
        trace.samples[i] = std::complex<float>(y);
    }
    return trace;
}

} // namespace tempofade
