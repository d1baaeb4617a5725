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

namespace tempofade {

// Modified Bessel functions of the first kind, in the overflow-safe forms the
// envelope likelihood needs. Arguments reach r*s/sigma^2, which is of order
// 1e3..1e6 on strongly specular frames, so I0 itself is useless; only log I0
// and the ratio I1/I0 are exposed. Power series below x = 50 (exact to double
// precision, no overflow since I0(50) ~ 3e20), truncated asymptotic expansion
// above (absolute error < 1e-11 at the switch point, decaying as 1/x^7).

/// log I0(x), valid for any finite x (even function).
double log_bessel_i0(double x);

/// I1(x)/I0(x) for x >= 0. Monotone from 0 to 1; ~x/2 near 0, ~1 - 1/(2x) for large x.
double bessel_i1_i0_ratio(double x);

/// I0(x) by direct summation; overflows past x ~ 700. Mostly for tests.
double bessel_i0(double x);

/// log I0(x) and I1(x)/I0(x) in one evaluation (x >= 0); the likelihood inner
/// loop calls this once per sample.
void bessel_log_i0_and_ratio(double x, double &log_i0, double &ratio);

} // namespace tempofade
