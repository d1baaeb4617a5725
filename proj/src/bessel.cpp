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

#include "tempofade/bessel.hpp"

#include <cmath>
#include <numbers>

namespace tempofade {

namespace {

constexpr double series_cutoff = 30.0;

// I0(x) = sum_k (x^2/4)^k / (k!)^2
double i0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 400; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term < sum * 1e-17)
            break;
    }
    return sum;
}

// I1(x) = (x/2) * sum_k (x^2/4)^k / (k! (k+1)!)
double i1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 400; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
        sum += term;
        if (term < sum * 1e-17)
            break;
    }
    return 0.5 * x * sum;
}

// Asymptotic tail polynomials in y = 1/x:
//   I_nu(x) ~ e^x / sqrt(2 pi x) * P_nu(1/x)
// with terms (-1)^k prod_j (mu - (2j-1)^2) / (k! 8^k), mu = 4 nu^2. Nine terms
// keep the truncation error below 1.4e-12 at the series/asymptotic switch.
double asym_poly(double y, const double (&c)[9]) {
    double p = c[8];
    for (int k = 7; k >= 0; --k)
        p = p * y + c[k];
    return p;
}

constexpr double i0_coeff[9] = {1.0,
                                0.125,
                                0.0703125,
                                0.0732421875,
                                0.112152099609375,
                                0.22710800170898438,
                                0.57250142097473145,
                                1.7277275025844574,
                                6.074042001273483};

constexpr double i1_coeff[9] = {1.0,
                                -0.375,
                                -0.1171875,
                                -0.1025390625,
                                -0.144195556640625,
                                -0.27757644653320312,
                                -0.67659258842468262,
                                -1.993531733751297,
                                -6.8839142681099474};

} // namespace

double bessel_i0(double x) { return i0_series(std::abs(x)); }

double log_bessel_i0(double x) {
    x = std::abs(x);
    if (x < series_cutoff)
        return std::log(i0_series(x));
    const double y = 1.0 / x;
    return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(asym_poly(y, i0_coeff));
}

double bessel_i1_i0_ratio(double x) {
    if (x <= 0.0)
        return 0.0;
    if (x < 1e-8)
        return 0.5 * x; // leading order, avoids 0/0 noise
    if (x < series_cutoff)
        return i1_series(x) / i0_series(x);
    const double y = 1.0 / x;
    return asym_poly(y, i1_coeff) / asym_poly(y, i0_coeff);
}

void bessel_log_i0_and_ratio(double x, double &log_i0, double &ratio) {
    if (x < series_cutoff) {
        // shared-term summation of I0 and I1/(x/2)
        const double q = 0.25 * x * x;
        double t0 = 1.0, s0 = 1.0;
        double t1 = 1.0, s1 = 1.0;
        for (int k = 1; k < 400; ++k) {
            const double kd = static_cast<double>(k);
            t0 *= q / (kd * kd);
            t1 *= q / (kd * (kd + 1.0));
            s0 += t0;
            s1 += t1;
            if (t0 < s0 * 1e-17)
                break;
        }
        log_i0 = std::log(s0);
        ratio = x > 0.0 ? 0.5 * x * s1 / s0 : 0.0;
        return;
    }
    const double y = 1.0 / x;
    const double p0 = asym_poly(y, i0_coeff);
    log_i0 = x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(p0);
    ratio = asym_poly(y, i1_coeff) / p0;
}

} // namespace tempofade
