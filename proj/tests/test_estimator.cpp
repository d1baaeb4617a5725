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

#include "tempofade/errors.hpp"
#include "tempofade/estimator.hpp"
#include "tempofade/rician.hpp"
#include "tempofade/scenario.hpp"
#include "tempofade/signal.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace tempofade;

namespace {

std::vector<double> rician_draws(std::uint64_t seed, std::size_t n, double s, double sigma) {
    Rng rng(seed);
    std::vector<double> env(n);
    for (auto &r : env)
        r = rician_sample(rng, s, sigma);
    return env;
}

/// Stationary complex trace with envelope ~ R(s, sigma) in root-mW units.
IQTrace stationary_trace(std::uint64_t seed, std::size_t n, double s_rootmw, double sigma_rootmw,
                         double norm_mw = 1e-4) {
    IQTrace trace;
    trace.norm_mw = norm_mw;
    trace.sample_rate_hz = 1e6;
    trace.samples.resize(n);
    Rng rng(seed);
    const double inv = 1.0 / std::sqrt(norm_mw);
    for (auto &z : trace.samples) {
        const std::complex<double> v =
            s_rootmw + sigma_rootmw * std::complex<double>(rng.gaussian(), rng.gaussian());
        z = std::complex<float>(v * inv);
    }
    return trace;
}

// residue recomputed the pedestrian way, independent of the implementation
double residue_oracle(std::span<const double> env, int bins, double s, double sigma) {
    const double lo = *std::min_element(env.begin(), env.end());
    const double hi = *std::max_element(env.begin(), env.end());
    const double w = (hi - lo) / bins;
    std::vector<double> count(static_cast<std::size_t>(bins), 0.0);
    for (double r : env) {
        auto k = static_cast<std::size_t>((r - lo) / w);
        if (k >= count.size())
            k = count.size() - 1;
        count[k] += 1.0;
    }
    double acc = 0.0;
    for (int k = 0; k < bins; ++k) {
        if (count[k] == 0.0)
            continue;
        const double p = count[k] / static_cast<double>(env.size());
        const double center = lo + (k + 0.5) * w;
        const double p_fit = rician_pdf(center, s, sigma) * w;
        acc += (p - p_fit) * (p - p_fit) / p;
    }
    return acc;
}

} // namespace

TEST_CASE("slice_frames arithmetic") {
    IQTrace trace;
    trace.sample_rate_hz = 1e6;

    trace.samples.assign(1'000'000, {1.0f, 0.0f});
    CHECK(slice_frames(trace, 5e-3).size() == 200);
    CHECK(slice_frames(trace, 5e-3)[0].samples.size() == 5000);

    trace.samples.assign(7500, {1.0f, 0.0f});
    const auto frames = slice_frames(trace, 5e-3);
    REQUIRE(frames.size() == 1);
    CHECK(frames[0].samples.size() == 5000);

    trace.samples.assign(4000, {1.0f, 0.0f});
    CHECK(slice_frames(trace, 5e-3).empty());

    trace.samples.clear();
    CHECK_THROWS_AS(slice_frames(trace, 5e-3), ValidationError);
}

TEST_CASE("fit_rician_mle input validation") {
    CHECK_THROWS_AS(fit_rician_mle(std::vector<double>(10, 1.0)), ValidationError);
    CHECK_THROWS_AS(fit_rician_mle(std::vector<double>(100, 0.0)), ValidationError);
    std::vector<double> with_negative(100, 1.0);
    with_negative[3] = -0.5;
    CHECK_THROWS_AS(fit_rician_mle(with_negative), ValidationError);
}

TEST_CASE("fit_rician_mle: constant envelope degenerates to the clamp") {
    const std::vector<double> env(5000, 2.0);
    const RicianFit fit = fit_rician_mle(env);
    CHECK(fit.status == RicianFit::Status::Degenerate);
    CHECK(fit.s == doctest::Approx(2.0));
    CHECK(fit.sigma == doctest::Approx(2e-12).epsilon(1e-6));
    CHECK(std::isfinite(fit.log_likelihood));
}

TEST_CASE("fit_rician_mle recovers field-scale parameters within 2%") {
    for (std::uint64_t seed : {7ULL, 8ULL, 9ULL}) {
        const auto env = rician_draws(seed, 100000, 0.02, 4e-4);
        const RicianFit fit = fit_rician_mle(env);
        REQUIRE(fit.ok());
        CHECK(std::abs(fit.s - 0.02) / 0.02 < 0.02);
        CHECK(std::abs(fit.sigma - 4e-4) / 4e-4 < 0.02);
    }
}

TEST_CASE("fit_rician_mle on pure scatter: tiny K factor") {
    const auto env = rician_draws(4, 100000, 0.0, 1.0);
    const RicianFit fit = fit_rician_mle(env);
    CHECK(fit.k_factor() < 0.05);
    CHECK(fit.sigma == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("MLE consistency: median error shrinks with sample count") {
    const double s_true = 1.0, sigma_true = 0.25;
    std::vector<double> med_s, med_sigma;
    for (std::size_t n : {std::size_t{1000}, std::size_t{10000}, std::size_t{100000}}) {
        std::vector<double> err_s, err_sigma;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto env = rician_draws(1000 + seed, n, s_true, sigma_true);
            const RicianFit fit = fit_rician_mle(env);
            err_s.push_back(std::abs(fit.s - s_true) / s_true);
            err_sigma.push_back(std::abs(fit.sigma - sigma_true) / sigma_true);
        }
        std::sort(err_s.begin(), err_s.end());
        std::sort(err_sigma.begin(), err_sigma.end());
        med_s.push_back(err_s[10]);
        med_sigma.push_back(err_sigma[10]);
    }
    CHECK(med_s[1] <= med_s[0]);
    CHECK(med_s[2] <= med_s[1]);
    CHECK(med_sigma[1] <= med_sigma[0]);
    CHECK(med_sigma[2] <= med_sigma[1]);
}

TEST_CASE("histogram densities integrate to one") {
    const auto env = rician_draws(10, 20000, 1.0, 0.2);
    const HistogramPdf hist = HistogramPdf::from_samples(env, 40);
    double integral = 0.0;
    std::size_t total = 0;
    for (std::size_t k = 0; k < hist.densities.size(); ++k) {
        integral += hist.densities[k] * hist.bin_width();
        total += hist.counts[k];
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(total == env.size());
}

TEST_CASE("residue agrees with an independent recomputation") {
    const auto env = rician_draws(11, 5000, 1.0, 0.2);
    const RicianFit fit = fit_rician_mle(env);
    const double oracle = residue_oracle(env, 40, fit.s, fit.sigma);
    CHECK(fit.residue == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("residue shrinks with sample count for well-specified data") {
    const auto env = rician_draws(12, 1'000'000, 1.0, 0.2);
    const HistogramPdf hist = HistogramPdf::from_samples(env, 40);
    RicianFit fit = fit_rician_mle(env);
    CHECK(residue(hist, fit) < 5e-4);
}

TEST_CASE("residue punishes a detuned sigma") {
    const auto env = rician_draws(13, 20000, 1.0, 0.2);
    const HistogramPdf hist = HistogramPdf::from_samples(env, 40);
    const RicianFit fit = fit_rician_mle(env);
    RicianFit detuned = fit;
    detuned.sigma *= 2.0;
    CHECK(residue(hist, detuned) > residue(hist, fit));
}

TEST_CASE("residue of the MLE is near-minimal over a +-20% parameter grid") {
    int wins = 0, frames = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto env = rician_draws(200 + seed, 5000, 0.02, 4e-4);
        const HistogramPdf hist = HistogramPdf::from_samples(env, 40);
        const RicianFit fit = fit_rician_mle(env);
        double best_grid = 1e300;
        for (int is = -2; is <= 2; ++is)
            for (int ig = -2; ig <= 2; ++ig) {
                if (is == 0 && ig == 0)
                    continue;
                RicianFit alt = fit;
                alt.s = fit.s * (1.0 + 0.1 * is);
                alt.sigma = fit.sigma * (1.0 + 0.1 * ig);
                best_grid = std::min(best_grid, residue(hist, alt));
            }
        ++frames;
        if (residue(hist, fit) <= best_grid)
            ++wins;
    }
    CHECK(wins >= static_cast<int>(0.95 * frames));
}

TEST_CASE("fit and residue are scale equivariant") {
    const auto env = rician_draws(14, 20000, 0.5, 0.1);
    const RicianFit fit = fit_rician_mle(env);

    const double a = 7.3;
    std::vector<double> scaled(env.size());
    for (std::size_t i = 0; i < env.size(); ++i)
        scaled[i] = a * env[i];
    const RicianFit fit2 = fit_rician_mle(scaled);

    CHECK(fit2.s == doctest::Approx(a * fit.s).epsilon(1e-9));
    CHECK(fit2.sigma == doctest::Approx(a * fit.sigma).epsilon(1e-9));
    CHECK(fit2.residue == doctest::Approx(fit.residue).epsilon(1e-9));
}

TEST_CASE("track on a stationary trace: flat parameters, stationary verdict") {
    const IQTrace trace = stationary_trace(21, 1'000'000, 0.02, 0.002);
    const EnvelopeAnalysis a = analyze_envelope(trace);
    REQUIRE(a.track.n_frames() == 200);

    std::vector<double> s, sigma;
    for (const auto &fit : a.track.fits) {
        REQUIRE(fit.ok());
        s.push_back(fit.s);
        sigma.push_back(fit.sigma);
    }
    auto cv = [](const std::vector<double> &v) {
        double m = 0.0, var = 0.0;
        for (double x : v)
            m += x;
        m /= static_cast<double>(v.size());
        for (double x : v)
            var += (x - m) * (x - m);
        return std::sqrt(var / static_cast<double>(v.size())) / m;
    };
    CHECK(cv(s) < 0.05);
    CHECK(cv(sigma) < 0.05);
    CHECK(a.stationarity.verdict == Stationarity::Verdict::Stationary);
    CHECK(a.stationarity.ratio < 3.0);
    CHECK(a.track.mean_residue < 0.01);
}

TEST_CASE("track is deterministic") {
    const IQTrace trace = stationary_trace(22, 200000, 0.02, 0.002);
    const DynamicRicianTrack a = track(trace);
    const DynamicRicianTrack b = track(trace);
    REQUIRE(a.fits.size() == b.fits.size());
    for (std::size_t i = 0; i < a.fits.size(); ++i) {
        CHECK(a.fits[i].s == b.fits[i].s);
        CHECK(a.fits[i].sigma == b.fits[i].sigma);
        CHECK(a.fits[i].residue == b.fits[i].residue);
    }
}

TEST_CASE("correlation of the fitted series") {
    SUBCASE("exact linear dependence") {
        DynamicRicianTrack tr;
        for (int i = 0; i < 50; ++i) {
            RicianFit fit;
            fit.s = 1.0 + 0.01 * i;
            fit.sigma = 0.02 * fit.s;
            fit.status = RicianFit::Status::Ok;
            tr.fits.push_back(fit);
            tr.frame_times.push_back(0.005 * i);
        }
        const auto r = correlation(tr);
        REQUIRE(r.has_value());
        CHECK(*r == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("zero variance is flagged undefined") {
        DynamicRicianTrack tr;
        for (int i = 0; i < 50; ++i) {
            RicianFit fit;
            fit.s = 1.0;
            fit.sigma = 0.02;
            fit.status = RicianFit::Status::Ok;
            tr.fits.push_back(fit);
            tr.frame_times.push_back(0.005 * i);
        }
        CHECK_FALSE(correlation(tr).has_value());
    }
    SUBCASE("too few frames") {
        DynamicRicianTrack tr;
        for (int i = 0; i < 5; ++i) {
            RicianFit fit;
            fit.status = RicianFit::Status::Ok;
            tr.fits.push_back(fit);
        }
        CHECK_THROWS_AS(correlation(tr), AnalysisError);
    }
}

TEST_CASE("constant-envelope trace yields a degenerate stationarity verdict") {
    IQTrace trace;
    trace.norm_mw = 1e-4;
    trace.sample_rate_hz = 1e6;
    trace.samples.assign(100000, {1.0f, 0.0f});
    const Stationarity st = stationarity_check(trace);
    CHECK(st.verdict == Stationarity::Verdict::Degenerate);
}

TEST_CASE("rssi error stats on a constant envelope are rounding-only") {
    IQTrace trace;
    trace.norm_mw = 1e-4;
    trace.sample_rate_hz = 1e6;
    trace.samples.assign(50000, {1.0f, 0.0f});
    const RssiErrorStats stats = rssi_error_stats(trace);
    CHECK(stats.n_frames == 10);
    CHECK(stats.mean_abs_db <= 0.5);
    CHECK(stats.max_abs_db <= 0.5);
}

TEST_CASE("coupled scenario correlates s with sigma; uncoupled does not") {
    Scenario sc = default_vehicle_scenario();
    sc.duration_s = 6.0;
    WaveformConfig wf;

    const EnvelopeAnalysis coupled = analyze_envelope(simulate_link(sc, wf));
    REQUIRE(coupled.s_sigma_correlation.has_value());

    sc.coupling_ratio = 0.0;
    const EnvelopeAnalysis uncoupled = analyze_envelope(simulate_link(sc, wf));
    REQUIRE(uncoupled.s_sigma_correlation.has_value());

    CHECK(*coupled.s_sigma_correlation > *uncoupled.s_sigma_correlation);
    CHECK(*coupled.s_sigma_correlation > 0.5);
    CHECK(std::abs(*uncoupled.s_sigma_correlation) < 0.2);
    CHECK(coupled.stationarity.verdict == Stationarity::Verdict::NonStationary);
}
