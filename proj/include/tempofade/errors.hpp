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

#include <stdexcept>
#include <string>

namespace tempofade {

/// Bad configuration or bad user input. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string &msg) : std::runtime_error(msg) {}
};

/// File or stream failure. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Data does not support the requested analysis. Maps to CLI exit code 2.
class AnalysisError : public std::runtime_error {
  public:
    explicit AnalysisError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace tempofade
