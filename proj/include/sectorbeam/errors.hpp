// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace sectorbeam {

/// Invalid input: bad config values, malformed files, mismatched shapes.
/// The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical or runtime failure during processing (singular systems,
/// directions outside every sector, ...). The CLI maps this to exit code 2.
class ProcessingError : public std::runtime_error {
 public:
  explicit ProcessingError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sectorbeam
