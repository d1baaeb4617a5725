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

#include "tempofade/estimator.hpp"

#include "tempofade/bessel.hpp"
#include "tempofade/errors.hpp"
#include "tempofade/rician.hpp"
#include "tempofade/stats.hpp"
#include "tempofade/trace_file.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

namespace tempofade {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();
constexpr double sigma_floor_rel = 1e-12; // times the sample RMS
constexpr double grad_tol = 1e-8;
constexpr int max_iterations = 200;

// ---------------------------------------------------------------------------
// MLE core. Works in RMS-normalized units: w_i = r_i / A with A the sample
// RMS, so gradients are dimensionless per-sample quantities and the sigma
// floor is simply sigma_floor_rel.

struct FitWork {
    std::span<const double> w;
    double mean_log_w = 0.0;
    double m2 = 0.0; // mean of w^2 (1 up to rounding)
};

double eval_f(const FitWork &fw, double s, double v) {
    const double inv_var = std::exp(-2.0 * v);
    const double scale = s * inv_var;
    double sum_li0 = 0.0;
    for (double r : fw.w)
        sum_li0 += log_bessel_i0(r * scale);
    const double n = static_cast<double>(fw.w.size());
    const double ll =
        fw.mean_log_w - 2.0 * v - 0.5 * (fw.m2 + s * s) * inv_var + sum_li0 / n;
    return -ll;
}

// Objective value, gradient and Hessian at (s, v = log sigma), all per sample.
// R'(x) = 1 - R^2 - R/x closes the system, so one pass collects everything.
struct FGH {
    double f = 0.0;
    double gs = 0.0;
    double gv = 0.0;
    double hss = 0.0;
    double hsv = 0.0;
    double hvv = 0.0;
};

FGH eval_fgh(const FitWork &fw, double s, double v) {
    const double e2 = std::exp(-2.0 * v); // 1/sigma^2
    const double scale = s * e2;
    double sum_li0 = 0.0;
    double sum_r_ratio = 0.0;
    double sum_r2_rp = 0.0;
    for (double r : fw.w) {
        const double x = r * scale;
        double li0, ratio;
        bessel_log_i0_and_ratio(x, li0, ratio);
        const double rp = x > 0.0 ? 1.0 - ratio * ratio - ratio / x : 0.5;
        sum_li0 += li0;
        sum_r_ratio += r * ratio;
        sum_r2_rp += r * r * rp;
    }
    const double n = static_cast<double>(fw.w.size());
    const double m_li0 = sum_li0 / n;
    const double m_rr = sum_r_ratio / n;
    const double m_r2p = sum_r2_rp / n;

    FGH out;
    out.f = -(fw.mean_log_w - 2.0 * v - 0.5 * (fw.m2 + s * s) * e2 + m_li0);
    out.gs = (s - m_rr) * e2;
    out.gv = 2.0 - (fw.m2 + s * s) * e2 + 2.0 * s * m_rr * e2;
    out.hss = e2 - e2 * e2 * m_r2p;
    out.hsv = e2 * (-2.0 * s + 2.0 * m_rr + 2.0 * s * e2 * m_r2p);
    out.hvv = 2.0 * (fw.m2 + s * s) * e2 - 4.0 * s * e2 * m_rr - 4.0 * s * s * e2 * e2 * m_r2p;
    return out;
}

struct Theta {
    double s = 0.0;
    double v = 0.0;
};

Theta clamp_theta(Theta t) {
    t.s = std::max(t.s, 0.0);
    t.v = std::max(t.v, std::log(sigma_floor_rel));
    return t;
}

struct CoreResult {
    double s = 0.0;
    double sigma = 0.0;
    double f = 0.0; // negative mean log-likelihood at the optimum
    RicianFit::Status status = RicianFit::Status::Ok;
    int iterations = 0;
};

// Moment-based starting point: matches mean and variance of w^2.
Theta moment_init(const FitWork &fw) {
    double m4 = 0.0;
    for (double r : fw.w)
        m4 += r * r * r * r;
    m4 /= static_cast<double>(fw.w.size());
    const double var_w2 = m4 - fw.m2 * fw.m2;
    const double disc = fw.m2 * fw.m2 - var_w2;
    double s2 = 0.0;
    double sig2 = 0.5 * fw.m2;
    if (disc > 0.0) {
        s2 = std::sqrt(disc);
        sig2 = 0.5 * (fw.m2 - s2);
    }
    Theta t;
    t.s = std::max(std::sqrt(std::max(s2, 0.0)), 1e-6); // s = 0 is a stationary point
    t.v = std::log(std::max(std::sqrt(std::max(sig2, 0.0)), sigma_floor_rel));
    return t;
}

// Damped Newton with an Armijo backtracking line search; falls back to a
// curvature-scaled gradient step whenever the Hessian is not positive
// definite.
CoreResult fit_core(const FitWork &fw) {
    CoreResult res;
    Theta theta = clamp_theta(moment_init(fw));
    FGH fgh = eval_fgh(fw, theta.s, theta.v);

    for (int iter = 0; iter < max_iterations; ++iter) {
        // projected gradient: ignore the s component when pinned at the
        // boundary and pushing outward
        double eff_gs = fgh.gs;
        if (theta.s == 0.0 && eff_gs > 0.0)
            eff_gs = 0.0;
        if (std::max(std::abs(eff_gs), std::abs(fgh.gv)) < grad_tol) {
            res.status = RicianFit::Status::Ok;
            res.iterations = iter;
            res.s = theta.s;
            res.sigma = std::exp(theta.v);
            res.f = fgh.f;
            return res;
        }

        const double det = fgh.hss * fgh.hvv - fgh.hsv * fgh.hsv;
        double ds, dv;
        if (fgh.hss > 0.0 && det > 0.0) {
            ds = (-fgh.gs * fgh.hvv + fgh.gv * fgh.hsv) / det;
            dv = (-fgh.gv * fgh.hss + fgh.gs * fgh.hsv) / det;
        } else {
            const double sigma2 = std::exp(2.0 * theta.v);
            ds = -fgh.gs * sigma2;
            dv = -fgh.gv * 0.5;
        }
        if (ds * fgh.gs + dv * fgh.gv >= 0.0) { // not a descent direction
            const double sigma2 = std::exp(2.0 * theta.v);
            ds = -fgh.gs * sigma2;
            dv = -fgh.gv * 0.5;
        }
        // trust region on raw step size
        const double cap = std::min({1.0, 2.0 / std::max(std::abs(dv), 1e-300),
                                     1.0 / std::max(std::abs(ds), 1e-300)});
        ds *= cap;
        dv *= cap;

        // In the quadratic-convergence basin the Newton decrement drops below
        // what the objective can resolve in double precision while the
        // gradient is still accurately computable. Take such micro-steps
        // unconditionally; the gradient test above remains the only exit.
        const double predicted_decrease = -0.5 * (fgh.gs * ds + fgh.gv * dv);
        if (predicted_decrease < 1e-12 * (1.0 + std::abs(fgh.f)) && std::abs(ds) < 1e-3 &&
            std::abs(dv) < 1e-3) {
            const Theta trial = clamp_theta({theta.s + ds, theta.v + dv});
            if (trial.s == theta.s && trial.v == theta.v)
                break;
            theta = trial;
            fgh = eval_fgh(fw, theta.s, theta.v);
            res.iterations = iter + 1;
            continue;
        }

        // Armijo with an absolute slack so steps whose true decrease is below
        // double rounding are still accepted near the optimum
        const double f_slack = 1e-14 * (1.0 + std::abs(fgh.f));

        // speculative full step first: Newton almost always accepts it, and the
        // combined pass is then reused as the next iterate's state
        {
            const Theta trial = clamp_theta({theta.s + ds, theta.v + dv});
            const double step_s = trial.s - theta.s;
            const double step_v = trial.v - theta.v;
            if (step_s == 0.0 && step_v == 0.0)
                break;
            const FGH probe = eval_fgh(fw, trial.s, trial.v);
            const double slope = fgh.gs * step_s + fgh.gv * step_v;
            if (probe.f <= fgh.f + 1e-4 * slope + f_slack) {
                theta = trial;
                fgh = probe;
                res.iterations = iter + 1;
                continue;
            }
        }

        double alpha = 0.5;
        bool accepted = false;
        Theta trial;
        for (int bt = 0; bt < 60; ++bt) {
            trial = clamp_theta({theta.s + alpha * ds, theta.v + alpha * dv});
            const double step_s = trial.s - theta.s;
            const double step_v = trial.v - theta.v;
            if (step_s == 0.0 && step_v == 0.0)
                break;
            const double f_trial = eval_f(fw, trial.s, trial.v);
            const double slope = fgh.gs * step_s + fgh.gv * step_v;
            if (f_trial <= fgh.f + 1e-4 * slope + f_slack) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted)
            break;

        theta = trial;
        fgh = eval_fgh(fw, theta.s, theta.v);
        res.iterations = iter + 1;
    }

    res.status = RicianFit::Status::MaxIterations;
    res.s = theta.s;
    res.sigma = std::exp(theta.v);
    res.f = fgh.f;
    return res;
}

// Full single-frame fit on raw (unnormalized) envelopes. Throws on
// precondition violations; never throws for numerically hard frames.
RicianFit fit_envelope_samples(std::span<const double> envelopes, int bins) {
    if (envelopes.size() < 50)
        throw ValidationError("fit_rician_mle: need at least 50 samples");
    std::vector<double> used;
    used.reserve(envelopes.size());
    for (double r : envelopes) {
        if (r < 0.0 || !std::isfinite(r))
            throw ValidationError("fit_rician_mle: envelope samples must be finite and >= 0");
        if (r > 0.0)
            used.push_back(r);
    }
    if (used.empty())
        throw ValidationError("fit_rician_mle: all samples are zero");
    if (used.size() < 50)
        throw ValidationError("fit_rician_mle: fewer than 50 nonzero samples");

    const double n = static_cast<double>(used.size());
    double sum_sq = 0.0;
    for (double r : used)
        sum_sq += r * r;
    const double rms = std::sqrt(sum_sq / n);

    std::vector<double> w(used.size());
    double mean_log = 0.0;
    double m2 = 0.0;
    double m4 = 0.0;
    for (std::size_t i = 0; i < used.size(); ++i) {
        w[i] = used[i] / rms;
        mean_log += std::log(w[i]);
        m2 += w[i] * w[i];
        m4 += w[i] * w[i] * w[i] * w[i];
    }
    mean_log /= n;
    m2 /= n;
    m4 /= n;

    RicianFit fit;
    fit.n_samples = used.size();

    const double var_w2 = m4 - m2 * m2;
    if (var_w2 < 1e-12) { // constant envelope, nothing to optimize
        fit.status = RicianFit::Status::Degenerate;
        fit.s = rms;
        fit.sigma = sigma_floor_rel * rms;
        double ll = 0.0;
        for (double r : used)
            ll += rician_log_pdf(r, fit.s, fit.sigma);
        fit.log_likelihood = ll;
        fit.residue = nan_value;
        return fit;
    }

    FitWork fw{w, mean_log, m2};
    const CoreResult core = fit_core(fw);
    fit.status = core.status;
    fit.iterations = core.iterations;
    fit.s = core.s * rms;
    fit.sigma = core.sigma * rms;
    // per-sample negative ll in normalized units -> total ll in input units
    fit.log_likelihood = -core.f * n - n * std::log(rms);

    const HistogramPdf hist = HistogramPdf::from_samples(used, bins);
    fit.residue = residue(hist, fit);
    return fit;
}

} // namespace

// ---------------------------------------------------------------------------

HistogramPdf HistogramPdf::from_samples(std::span<const double> samples, int bins) {
    if (samples.empty())
        throw ValidationError("histogram: no samples");
    if (bins < 1)
        throw ValidationError("histogram: bins must be >= 1");
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *lo_it;
    const double hi = *hi_it;

    HistogramPdf h;
    h.n_total = samples.size();
    if (!(hi > lo)) {
        h.degenerate = true;
        h.bin_edges = {lo, lo};
        h.counts = {samples.size()};
        h.densities = {nan_value};
        return h;
    }

    const std::size_t nb = static_cast<std::size_t>(bins);
    h.bin_edges.resize(nb + 1);
    const double width = (hi - lo) / static_cast<double>(nb);
    for (std::size_t i = 0; i <= nb; ++i)
        h.bin_edges[i] = lo + static_cast<double>(i) * width;
    h.counts.assign(nb, 0);
    for (double x : samples) {
        auto idx = static_cast<std::size_t>((x - lo) / width);
        if (idx >= nb)
            idx = nb - 1; // x == hi
        ++h.counts[idx];
    }
    h.densities.resize(nb);
    const double norm = 1.0 / (static_cast<double>(samples.size()) * width);
    for (std::size_t i = 0; i < nb; ++i)
        h.densities[i] = static_cast<double>(h.counts[i]) * norm;
    return h;
}

void AnalysisOptions::validate() const {
    if (!(frame_s > 0.0))
        throw ValidationError("analysis.frame_s must be positive");
    if (bins < 4)
        throw ValidationError("analysis.bins must be >= 4");
    if (!(stationarity_threshold > 0.0))
        throw ValidationError("analysis.stationarity_threshold must be positive");
}

std::vector<Frame> slice_frames(const IQTrace &trace, double frame_s) {
    if (trace.samples.empty())
        throw ValidationError("slice_frames: empty trace");
    if (!(frame_s > 0.0))
        throw ValidationError("slice_frames: frame_s must be positive");
    const std::size_t frame_len =
        static_cast<std::size_t>(std::llround(trace.sample_rate_hz * frame_s));
    if (frame_len == 0)
        throw ValidationError("slice_frames: frame shorter than one sample");
    const std::size_t n_frames = trace.samples.size() / frame_len;
    std::vector<Frame> frames;
    frames.reserve(n_frames);
    for (std::size_t f = 0; f < n_frames; ++f) {
        Frame fr;
        fr.index = f;
        fr.start_time_s = trace.start_time_s + static_cast<double>(f) * frame_s;
        fr.sample_rate_hz = trace.sample_rate_hz;
        fr.samples = std::span<const std::complex<float>>(trace.samples)
                         .subspan(f * frame_len, frame_len);
        frames.push_back(fr);
    }
    return frames;
}

RicianFit fit_rician_mle(std::span<const double> envelopes, int bins) {
    return fit_envelope_samples(envelopes, bins);
}

double residue(const HistogramPdf &hist, const RicianFit &fit) {
    if (hist.degenerate)
        return nan_value;
    const double width = hist.bin_width();
    const double inv_n = 1.0 / static_cast<double>(hist.n_total);
    double acc = 0.0;
    for (std::size_t k = 0; k < hist.counts.size(); ++k) {
        if (hist.counts[k] == 0)
            continue;
        const double p = static_cast<double>(hist.counts[k]) * inv_n;
        const double p_fit = rician_pdf(hist.center(k), fit.s, fit.sigma) * width;
        acc += (p - p_fit) * (p - p_fit) / p;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Streaming pipeline

struct EnvelopeAnalyzer::Impl {
    double norm_mw = 0.0;
    double sample_rate_hz = 0.0;
    AnalysisOptions opts;
    double sqrt_norm = 0.0;
    std::size_t frame_len = 0;
    std::size_t rssi_window = 0;
    std::size_t subsample_stride = 1;
    std::size_t sample_counter = 0;
    std::size_t frames_in = 0;
    unsigned threads = 1;

    struct FrameResult {
        double t0 = 0.0;
        RicianFit fit;
        HistogramPdf hist;
        double rssi_err = 0.0;
        bool rssi_valid = false;
    };

    std::vector<FrameResult> done;
    std::vector<std::vector<double>> batch_env;
    std::vector<double> batch_t0;
    std::vector<std::pair<double, bool>> batch_rssi;
    std::vector<double> global_subsample;

    static constexpr std::size_t batch_frames = 128;

    void flush() {
        if (batch_env.empty())
            return;
        const std::size_t base = done.size();
        done.resize(base + batch_env.size());
        auto work = [&](unsigned tid) {
            for (std::size_t i = tid; i < batch_env.size(); i += threads) {
                FrameResult fr;
                fr.t0 = batch_t0[i];
                fr.rssi_err = batch_rssi[i].first;
                fr.rssi_valid = batch_rssi[i].second;
                try {
                    fr.fit = fit_envelope_samples(batch_env[i], opts.bins);
                    fr.hist = HistogramPdf::from_samples(batch_env[i], opts.bins);
                } catch (const ValidationError &) {
                    fr.fit = RicianFit{};
                    fr.fit.status = RicianFit::Status::Degenerate;
                    fr.fit.residue = nan_value;
                    fr.hist.degenerate = true;
                }
                done[base + i] = std::move(fr);
            }
        };
        if (threads <= 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back(work, t);
            for (auto &th : pool)
                th.join();
        }
        batch_env.clear();
        batch_t0.clear();
        batch_rssi.clear();
    }
};

EnvelopeAnalyzer::EnvelopeAnalyzer(double norm_mw, double sample_rate_hz,
                                   std::uint64_t expected_samples, const AnalysisOptions &opts)
    : impl_(std::make_unique<Impl>()) {
    opts.validate();
    if (!(norm_mw > 0.0))
        throw ValidationError("envelope analysis: norm_mw must be positive");
    impl_->norm_mw = norm_mw;
    impl_->sample_rate_hz = sample_rate_hz;
    impl_->opts = opts;
    impl_->sqrt_norm = std::sqrt(norm_mw);
    impl_->frame_len = static_cast<std::size_t>(std::llround(sample_rate_hz * opts.frame_s));
    if (impl_->frame_len == 0)
        throw ValidationError("envelope analysis: frame shorter than one sample");
    impl_->rssi_window = static_cast<std::size_t>(std::llround(sample_rate_hz * 16e-6));
    impl_->subsample_stride = std::max<std::size_t>(
        1, expected_samples / std::max<std::size_t>(1, opts.max_global_fit_samples));
    impl_->threads = opts.threads != 0
                         ? opts.threads
                         : std::max(1u, std::thread::hardware_concurrency());
}

EnvelopeAnalyzer::~EnvelopeAnalyzer() = default;

void EnvelopeAnalyzer::add_frame(std::span<const std::complex<float>> samples) {
    Impl &im = *impl_;
    if (samples.size() != im.frame_len)
        throw ValidationError("envelope analysis: frame length mismatch");

    std::vector<double> env(samples.size());
    double frame_power = 0.0;
    double window_power = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double re = samples[i].real();
        const double imp = samples[i].imag();
        const double p = re * re + imp * imp;
        env[i] = im.sqrt_norm * std::sqrt(p);
        frame_power += p;
        if (i < im.rssi_window)
            window_power += p;
        if (im.sample_counter++ % im.subsample_stride == 0)
            im.global_subsample.push_back(env[i]);
    }

    double rssi_err = 0.0;
    bool rssi_valid = false;
    if (im.rssi_window > 0 && samples.size() >= im.rssi_window && window_power > 0.0 &&
        frame_power > 0.0) {
        const double win_dbm = 10.0 * std::log10(im.norm_mw * window_power /
                                                 static_cast<double>(im.rssi_window));
        const double frame_dbm = 10.0 * std::log10(im.norm_mw * frame_power /
                                                   static_cast<double>(samples.size()));
        rssi_err = std::abs(static_cast<double>(std::lround(win_dbm)) - frame_dbm);
        rssi_valid = true;
    }

    im.batch_t0.push_back(static_cast<double>(im.frames_in) * im.opts.frame_s);
    im.batch_rssi.emplace_back(rssi_err, rssi_valid);
    im.batch_env.push_back(std::move(env));
    ++im.frames_in;
    if (im.batch_env.size() >= Impl::batch_frames)
        im.flush();
}

EnvelopeAnalysis EnvelopeAnalyzer::finish() {
    Impl &im = *impl_;
    im.flush();
    if (im.done.size() < 2)
        throw AnalysisError("envelope analysis: need at least two full frames");

    EnvelopeAnalysis out;
    out.track.frame_times.reserve(im.done.size());
    out.track.fits.reserve(im.done.size());

    double residue_acc = 0.0;
    std::size_t residue_n = 0;
    std::vector<double> s_series, sigma_series;
    double ks_acc = 0.0;
    std::size_t ks_n = 0;
    double rssi_acc = 0.0, rssi_max = 0.0;
    std::size_t rssi_n = 0;
    out.s_min = std::numeric_limits<double>::infinity();
    out.s_max = -std::numeric_limits<double>::infinity();

    for (const auto &fr : im.done) {
        out.track.frame_times.push_back(fr.t0);
        out.track.fits.push_back(fr.fit);
        if (std::isfinite(fr.fit.residue)) {
            residue_acc += fr.fit.residue;
            ++residue_n;
        }
        if (fr.fit.ok()) {
            s_series.push_back(fr.fit.s);
            sigma_series.push_back(fr.fit.sigma);
            out.s_min = std::min(out.s_min, fr.fit.s);
            out.s_max = std::max(out.s_max, fr.fit.s);
        }
        if (fr.rssi_valid) {
            rssi_acc += fr.rssi_err;
            rssi_max = std::max(rssi_max, fr.rssi_err);
            ++rssi_n;
        }
    }

    out.track.mean_residue = residue_n > 0 ? residue_acc / static_cast<double>(residue_n)
                                           : nan_value;
    out.rssi = {rssi_n > 0 ? rssi_acc / static_cast<double>(rssi_n) : 0.0, rssi_max, rssi_n};

    if (s_series.size() >= 10)
        out.s_sigma_correlation = pearson_correlation(s_series, sigma_series);

    // whole-trace fit on the deterministic stride subsample, scored per frame
    // with the same statistic the per-frame fits use
    out.stationarity.verdict = Stationarity::Verdict::Degenerate;
    if (im.global_subsample.size() >= 50 && residue_n > 0 && out.track.mean_residue > 0.0) {
        try {
            out.stationarity.global_fit = fit_envelope_samples(im.global_subsample, im.opts.bins);
            if (out.stationarity.global_fit.status != RicianFit::Status::Degenerate) {
                double acc = 0.0;
                std::size_t n = 0;
                for (const auto &fr : im.done) {
                    if (fr.hist.degenerate)
                        continue;
                    const double r = residue(fr.hist, out.stationarity.global_fit);
                    if (std::isfinite(r)) {
                        acc += r;
                        ++n;
                    }
                }
                if (n > 0) {
                    const double global_frame_residue = acc / static_cast<double>(n);
                    out.stationarity.ratio = global_frame_residue / out.track.mean_residue;
                    out.stationarity.verdict = out.stationarity.ratio > im.opts.stationarity_threshold
                                                   ? Stationarity::Verdict::NonStationary
                                                   : Stationarity::Verdict::Stationary;
                }
            }
        } catch (const ValidationError &) {
            // keep the degenerate verdict
        }
    }

    // auxiliary: histogram-resolution KS distance of each frame against its fit
    for (const auto &fr : im.done) {
        if (fr.hist.degenerate || !fr.fit.ok())
            continue;
        const double width = fr.hist.bin_width();
        double cum_emp = 0.0, cum_fit = 0.0, worst = 0.0;
        for (std::size_t k = 0; k < fr.hist.counts.size(); ++k) {
            cum_emp += static_cast<double>(fr.hist.counts[k]) /
                       static_cast<double>(fr.hist.n_total);
            cum_fit += rician_pdf(fr.hist.center(k), fr.fit.s, fr.fit.sigma) * width;
            worst = std::max(worst, std::abs(cum_emp - cum_fit));
        }
        ks_acc += worst;
        ++ks_n;
    }
    out.mean_ks = ks_n > 0 ? ks_acc / static_cast<double>(ks_n) : nan_value;

    if (s_series.empty()) {
        out.s_min = 0.0;
        out.s_max = 0.0;
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

EnvelopeAnalysis analyze_in_memory(const IQTrace &trace, const AnalysisOptions &opts) {
    const auto frames = slice_frames(trace, opts.frame_s);
    if (frames.size() < 2)
        throw AnalysisError("envelope analysis: need at least two full frames");
    EnvelopeAnalyzer analyzer(trace.norm_mw, trace.sample_rate_hz, trace.samples.size(), opts);
    for (const auto &f : frames)
        analyzer.add_frame(f.samples);
    return analyzer.finish();
}

} // namespace

DynamicRicianTrack track(const IQTrace &trace, const AnalysisOptions &opts) {
    return analyze_in_memory(trace, opts).track;
}

std::optional<double> correlation(const DynamicRicianTrack &track) {
    std::vector<double> s, sigma;
    for (const auto &fit : track.fits) {
        if (fit.ok()) {
            s.push_back(fit.s);
            sigma.push_back(fit.sigma);
        }
    }
    if (s.size() < 10)
        throw AnalysisError("correlation: need at least 10 converged frames");
    return pearson_correlation(s, sigma);
}

Stationarity stationarity_check(const IQTrace &trace, const AnalysisOptions &opts) {
    return analyze_in_memory(trace, opts).stationarity;
}

RssiErrorStats rssi_error_stats(const IQTrace &trace, const AnalysisOptions &opts) {
    opts.validate();
    const auto frames = slice_frames(trace, opts.frame_s);
    if (frames.empty())
        throw AnalysisError("rssi_error_stats: trace shorter than one frame");
    RssiErrorStats stats;
    double acc = 0.0;
    for (const auto &frame : frames) {
        double power = 0.0;
        for (const auto &z : frame.samples)
            power += std::norm(std::complex<double>(z));
        if (power <= 0.0)
            continue;
        const double frame_dbm =
            10.0 * std::log10(trace.norm_mw * power / static_cast<double>(frame.samples.size()));
        const double err = std::abs(rssi_estimate(frame, trace.norm_mw) - frame_dbm);
        acc += err;
        stats.max_abs_db = std::max(stats.max_abs_db, err);
        ++stats.n_frames;
    }
    if (stats.n_frames > 0)
        stats.mean_abs_db = acc / static_cast<double>(stats.n_frames);
    return stats;
}

EnvelopeAnalysis analyze_envelope(const IQTrace &trace, const AnalysisOptions &opts) {
    return analyze_in_memory(trace, opts);
}

EnvelopeAnalysis analyze_envelope_file(const std::filesystem::path &path,
                                       const AnalysisOptions &opts) {
    TraceFileReader reader(path);
    const TraceHeader &header = reader.header();
    const std::size_t frame_len =
        static_cast<std::size_t>(std::llround(header.sample_rate_hz * opts.frame_s));
    if (frame_len == 0)
        throw ValidationError("envelope analysis: frame shorter than one sample");
    EnvelopeAnalyzer analyzer(header.norm_mw, header.sample_rate_hz, header.sample_count, opts);
    std::vector<std::complex<float>> buf(frame_len);
    const std::size_t n_frames = header.sample_count / frame_len;
    for (std::size_t f = 0; f < n_frames; ++f) {
        if (reader.read(buf) != frame_len)
            throw IoError("short read in trace payload: " + path.string());
        analyzer.add_frame(buf);
    }
    return analyzer.finish();
}

// ---------------------------------------------------------------------------

void write_track_csv(std::ostream &os, const DynamicRicianTrack &track) {
    os << "frame_index,time_s,s,sigma,residue,loglik\n";
    char buf[192];
    for (std::size_t i = 0; i < track.fits.size(); ++i) {
        const auto &fit = track.fits[i];
        std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g,%.9g,%.9g,%.9g\n", i,
                      track.frame_times[i], fit.s, fit.sigma, fit.residue, fit.log_likelihood);
        os << buf;
    }
}

void write_summary_json(std::ostream &os, const EnvelopeAnalysis &analysis) {
    nlohmann::ordered_json j;
    j["n_frames"] = analysis.track.n_frames();
    j["mean_residue"] = analysis.track.mean_residue;
    if (analysis.s_sigma_correlation)
        j["s_sigma_correlation"] = *analysis.s_sigma_correlation;
    else
        j["s_sigma_correlation"] = nullptr;
    const char *verdict = "degenerate";
    if (analysis.stationarity.verdict == Stationarity::Verdict::Stationary)
        verdict = "stationary";
    else if (analysis.stationarity.verdict == Stationarity::Verdict::NonStationary)
        verdict = "non-stationary";
    j["stationarity"]["verdict"] = verdict;
    j["stationarity"]["ratio"] = analysis.stationarity.ratio;
    j["s_range"]["min"] = analysis.s_min;
    j["s_range"]["max"] = analysis.s_max;
    j["rssi"]["mean_abs_db"] = analysis.rssi.mean_abs_db;
    j["rssi"]["max_abs_db"] = analysis.rssi.max_abs_db;
    j["rssi"]["n_frames"] = analysis.rssi.n_frames;
    j["mean_ks"] = analysis.mean_ks;
    os << j.dump(2) << "\n";
}

} // namespace tempofade
