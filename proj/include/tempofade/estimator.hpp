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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace tempofade {

/// Maximum-likelihood envelope fit of one frame. Envelope units follow the
/// input (the track pipeline fits amplitudes in root-milliwatts).
struct RicianFit {
    enum class Status { Ok, Degenerate, MaxIterations };

    double s = 0.0;
    double sigma = 0.0;
    double log_likelihood = 0.0;
    double residue = 0.0; // per-frame density-fit discrepancy; NaN if not computable
    std::size_t n_samples = 0;
    Status status = Status::Ok;
    int iterations = 0;

    bool ok() const { return status == Status::Ok; }
    double k_factor() const { return s * s / (2.0 * sigma * sigma); }
};

/// Normalized envelope histogram: uniform bins spanning [min, max] of the
/// samples, densities integrating to one.
struct HistogramPdf {
    std::vector<double> bin_edges; // bins + 1
    std::vector<double> densities;
    std::vector<std::size_t> counts;
    std::size_t n_total = 0;
    bool degenerate = false; // zero-width sample range

    static HistogramPdf from_samples(std::span<const double> samples, int bins);

    double bin_width() const { return bin_edges.size() > 1 ? bin_edges[1] - bin_edges[0] : 0.0; }
    double center(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
};

struct DynamicRicianTrack {
    std::vector<double> frame_times; // frame start times, s
    std::vector<RicianFit> fits;
    double mean_residue = 0.0; // over frames with a computable residue

    std::size_t n_frames() const { return fits.size(); }
};

struct AnalysisOptions {
    double frame_s = 5e-3;
    int bins = 40;
    double stationarity_threshold = 3.0;
    /// Cap on the deterministic stride subsample used for whole-trace diagnostics.
    std::size_t max_global_fit_samples = 2'000'000;
    unsigned threads = 0; // 0 = hardware concurrency

    void validate() const;
};

/// Consecutive non-overlapping frames; a trailing partial frame is dropped.
std::vector<Frame> slice_frames(const IQTrace &trace, double frame_s = 5e-3);

/// Fits R(s, sigma) by maximum likelihood: moment-based init, then BFGS on
/// (s, log sigma) with analytic gradients through the Bessel ratio I1/I0.
/// Requires >= 50 non-negative samples; exact zeros are excluded from the
/// likelihood. sigma is clamped to 1e-12 times the sample RMS from below.
RicianFit fit_rician_mle(std::span<const double> envelopes, int bins = 40);

/// Density-fit discrepancy: sum over occupied bins of (p_k - p̂_k)^2 / p_k,
/// with p_k the empirical bin mass and p̂_k the fitted density integrated over
/// the bin (center value times width). NaN for a degenerate histogram.
double residue(const HistogramPdf &hist, const RicianFit &fit);

/// Per-frame MLE track over a trace; envelopes are sqrt(norm_mw) * |z|.
DynamicRicianTrack track(const IQTrace &trace, const AnalysisOptions &opts = {});

/// Pearson correlation between the per-frame s and sigma series (converged
/// fits only). Empty when a series has no variance. Requires >= 10 frames.
std::optional<double> correlation(const DynamicRicianTrack &track);

struct Stationarity {
    enum class Verdict { Stationary, NonStationary, Degenerate };
    Verdict verdict = Verdict::Degenerate;
    double ratio = 0.0; // global-fit frame residue over per-frame-fit residue
    RicianFit global_fit;
};

Stationarity stationarity_check(const IQTrace &trace, const AnalysisOptions &opts = {});

struct RssiErrorStats {
    double mean_abs_db = 0.0;
    double max_abs_db = 0.0;
    std::size_t n_frames = 0;
};

/// Per frame: |windowed RSSI - true frame mean power in dBm|.
RssiErrorStats rssi_error_stats(const IQTrace &trace, const AnalysisOptions &opts = {});

/// Everything the envelope pipeline produces in one pass.
struct EnvelopeAnalysis {
    DynamicRicianTrack track;
    std::optional<double> s_sigma_correlation;
    Stationarity stationarity;
    RssiErrorStats rssi;
    double mean_ks = 0.0; // histogram-resolution Kolmogorov-Smirnov, auxiliary
    double s_max = 0.0;
    double s_min = 0.0;
};

EnvelopeAnalysis analyze_envelope(const IQTrace &trace, const AnalysisOptions &opts = {});

/// Streaming variant for large trace files.
EnvelopeAnalysis analyze_envelope_file(const std::filesystem::path &path,
                                       const AnalysisOptions &opts = {});

/// Incremental pipeline: frames in, EnvelopeAnalysis out. Used by the
/// in-memory, file and simulation-sink front ends above.
class EnvelopeAnalyzer {
  public:
    EnvelopeAnalyzer(double norm_mw, double sample_rate_hz, std::uint64_t expected_samples,
                     const AnalysisOptions &opts);
    ~EnvelopeAnalyzer();

    void add_frame(std::span<const std::complex<float>> samples);
    EnvelopeAnalysis finish();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

void write_track_csv(std::ostream &os, const DynamicRicianTrack &track);
void write_summary_json(std::ostream &os, const EnvelopeAnalysis &analysis);

} // namespace tempofade
