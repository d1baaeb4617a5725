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

#include "tempofade/rng.hpp"

namespace tempofade {

// Rician envelope law R(s, sigma):
//   f(r) = r/sigma^2 * exp(-(r^2 + s^2) / (2 sigma^2)) * I0(r s / sigma^2)
// where s^2 is the specular (coherent) power and 2 sigma^2 is the mean
// scattered power. K-factor = s^2 / (2 sigma^2).

/// Log density; -inf for r <= 0.
double rician_log_pdf(double r, double s, double sigma);

double rician_pdf(double r, double s, double sigma);

/// One envelope draw: |s + sigma * (g1 + i g2)| with g1, g2 standard normal.
double rician_sample(Rng &rng, double s, double sigma);

inline double rician_k_factor(double s, double sigma) { return s * s / (2.0 * sigma * sigma); }

} // namespace tempofade
