// Copyright 2026 The packet-teleport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace teleport {

enum class ErrorKind {
    InvalidArgument,
    OffGridFrequency,
    OffGridTime,
    OffGridDetector,
    EmptyEpr,
    ZeroTotal,
    ZeroWeightOutcome,
    NotFired,
    NonPositiveInput,
    GridTooLarge,
    DegenerateFit,
    Config,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::OffGridFrequency: return "OffGridFrequency";
        case ErrorKind::OffGridTime: return "OffGridTime";
        case ErrorKind::OffGridDetector: return "OffGridDetector";
        case ErrorKind::EmptyEpr: return "EmptyEpr";
        case ErrorKind::ZeroTotal: return "ZeroTotal";
        case ErrorKind::ZeroWeightOutcome: return "ZeroWeightOutcome";
        case ErrorKind::NotFired: return "NotFired";
        case ErrorKind::NonPositiveInput: return "NonPositiveInput";
        case ErrorKind::GridTooLarge: return "GridTooLarge";
        case ErrorKind::DegenerateFit: return "DegenerateFit";
        case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

/// Error raised by every simulator module. `component()` names the module
/// that rejected the input ("freqgrid", "states", "povm", "scheme",
/// "oracle", "cli"); `field()` is set for configuration errors.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string component, const std::string &message,
          std::string field = {})
        : std::runtime_error(message), kind_(kind), component_(std::move(component)),
          field_(std::move(field)) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string &component() const noexcept { return component_; }
    [[nodiscard]] const std::string &field() const noexcept { return field_; }

  private:
    ErrorKind kind_;
    std::string component_;
    std::string field_;
};

} // namespace teleport
