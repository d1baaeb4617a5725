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

#include "tempofade/rician.hpp"

#include "tempofade/bessel.hpp"

#include <cmath>
#include <limits>

namespace tempofade {

double rician_log_pdf(double r, double s, double sigma) {
    if (r <= 0.0 || sigma <= 0.0)
        return -std::numeric_limits<double>::infinity();
    const double inv_var = 1.0 / (sigma * sigma);
    // log I0 grows like its argument; combined with the Gaussian exponent this
    // collapses to -(r-s)^2/(2 sigma^2) + O(log), so no overflow at high K.
    return std::log(r * inv_var) - 0.5 * (r * r + s * s) * inv_var + log_bessel_i0(r * s * inv_var);
}

double rician_pdf(double r, double s, double sigma) {
    const double lp = rician_log_pdf(r, s, sigma);
    return std::isfinite(lp) ? std::exp(lp) : 0.0;
}

double rician_sample(Rng &rng, double s, double sigma) {
    const double re = s + sigma * rng.gaussian();
    const double im = sigma * rng.gaussian();
    return std::sqrt(re * re + im * im);
}

} // namespace tempofade
