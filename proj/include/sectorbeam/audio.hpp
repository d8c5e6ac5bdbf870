// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "sectorbeam/errors.hpp"

namespace sectorbeam {

/// Multichannel time-domain audio, one row per channel.
struct MultichannelAudio {
  Eigen::MatrixXd samples;  // channels x time
  double sample_rate_hz = 16000.0;

  int channels() const { return static_cast<int>(samples.rows()); }
  Eigen::Index length() const { return samples.cols(); }
};

}  // namespace sectorbeam
