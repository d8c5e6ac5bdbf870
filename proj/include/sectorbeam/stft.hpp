// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sectorbeam/audio.hpp"
#include "sectorbeam/errors.hpp"

namespace sectorbeam {

/// Analysis/synthesis parameters. The sqrt-Hann pair at hop <= n_fft/2
/// satisfies COLA, and the inverse divides by the accumulated squared
/// window, so the round trip is exact to machine precision.
struct StftConfig {
  enum class Window { sqrt_hann };

  int n_fft = 512;
  int hop = 256;
  Window window = Window::sqrt_hann;
  double sample_rate_hz = 16000.0;

  int bins() const { return n_fft / 2 + 1; }
  double bin_freq_hz(int bin) const { return bin * sample_rate_hz / n_fft; }
  void validate() const;
};

/// Complex STFT of a multichannel signal; only non-negative-frequency bins
/// are stored, one (bins x frames) matrix per channel.
struct SpectrogramTensor {
  std::vector<Eigen::MatrixXcd> channels;
  StftConfig config;
  Eigen::Index signal_length = 0;  // original sample count, for inverse trim

  int channel_count() const { return static_cast<int>(channels.size()); }
  int frames() const {
    return channels.empty() ? 0 : static_cast<int>(channels.front().cols());
  }
};

/// Periodic sqrt-Hann analysis window, w[n] = sin(pi*n/N).
Eigen::VectorXd sqrt_hann_window(int n_fft);

/// Windowed, hop-advanced DFT per channel. Input is reflect-padded by
/// n_fft - hop on each side; signals shorter than n_fft are zero-padded.
SpectrogramTensor stft_forward(const MultichannelAudio& audio, const StftConfig& cfg);

/// Weighted overlap-add inverse with synthesis window = analysis window.
/// Output length equals the original input length.
MultichannelAudio stft_inverse(const SpectrogramTensor& spec);

}  // namespace sectorbeam
