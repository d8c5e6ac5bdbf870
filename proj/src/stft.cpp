// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#include "sectorbeam/stft.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "sectorbeam/geometry.hpp"

namespace sectorbeam {

void StftConfig::validate() const {
  if (n_fft < 2 || (n_fft & (n_fft - 1)) != 0) {
    throw ConfigError("stft.n_fft must be a power of two >= 2");
  }
  if (hop < 1 || n_fft % hop != 0 || hop > n_fft / 2) {
    throw ConfigError("stft.hop must divide n_fft and be <= n_fft/2");
  }
  if (!(sample_rate_hz > 0.0)) {
    throw ConfigError("stft.sample_rate_hz must be positive");
  }
}

Eigen::VectorXd sqrt_hann_window(int n_fft) {
  Eigen::VectorXd w(n_fft);
  for (int n = 0; n < n_fft; ++n) {
    w[n] = std::sin(kPi * n / n_fft);
  }
  return w;
}

namespace {

// Reflect-pads by `pad` on each side (no edge duplication); zero-pads
// signals shorter than one frame first. Frame count is
// floor((padded - n_fft)/hop) + 1; the inverse's window-sum division keeps
// the round trip exact even where the trailing frames overlap partially.
std::vector<double> pad_signal(const Eigen::VectorXd& x, int n_fft, int hop,
                               int* frames_out) {
  const int pad = n_fft - hop;
  Eigen::VectorXd base = x;
  if (base.size() < n_fft) {
    Eigen::VectorXd extended = Eigen::VectorXd::Zero(n_fft);
    extended.head(base.size()) = base;
    base = extended;
  }
  const auto blen = base.size();
  const auto padded_len = blen + 2 * static_cast<Eigen::Index>(pad);
  *frames_out = static_cast<int>((padded_len - n_fft) / hop) + 1;

  std::vector<double> out(static_cast<std::size_t>(padded_len), 0.0);
  for (Eigen::Index i = 0; i < blen; ++i) {
    out[static_cast<std::size_t>(pad + i)] = base[i];
  }
  for (int i = 1; i <= pad; ++i) {
    const auto left = std::min<Eigen::Index>(i, blen - 1);
    const auto right = std::max<Eigen::Index>(blen - 1 - i, 0);
    out[static_cast<std::size_t>(pad - i)] = base[left];
    out[static_cast<std::size_t>(pad + blen - 1 + i)] = base[right];
  }
  return out;
}

}  // namespace

SpectrogramTensor stft_forward(const MultichannelAudio& audio, const StftConfig& cfg) {
  cfg.validate();
  if (audio.channels() < 1 || audio.length() < 1) {
    throw ConfigError("stft_forward: empty input");
  }
  if (!audio.samples.allFinite()) {
    throw ConfigError("stft_forward: input contains non-finite samples");
  }

  const int n_fft = cfg.n_fft;
  const int hop = cfg.hop;
  const Eigen::VectorXd window = sqrt_hann_window(n_fft);

  SpectrogramTensor spec;
  spec.config = cfg;
  spec.signal_length = audio.length();
  spec.channels.reserve(static_cast<std::size_t>(audio.channels()));

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> freq(static_cast<std::size_t>(n_fft));
  std::vector<double> frame(static_cast<std::size_t>(n_fft));

  for (int ch = 0; ch < audio.channels(); ++ch) {
    int frames = 0;
    const std::vector<double> padded =
        pad_signal(audio.samples.row(ch).transpose(), n_fft, hop, &frames);
    Eigen::MatrixXcd out(cfg.bins(), frames);
    for (int t = 0; t < frames; ++t) {
      const std::size_t start = static_cast<std::size_t>(t) * static_cast<std::size_t>(hop);
      for (int n = 0; n < n_fft; ++n) {
        frame[static_cast<std::size_t>(n)] = window[n] * padded[start + static_cast<std::size_t>(n)];
      }
      fft.fwd(freq, frame);
      for (int b = 0; b < cfg.bins(); ++b) {
        out(b, t) = freq[static_cast<std::size_t>(b)];
      }
    }
    spec.channels.push_back(std::move(out));
  }
  return spec;
}

MultichannelAudio stft_inverse(const SpectrogramTensor& spec) {
  spec.config.validate();
  if (spec.channels.empty()) {
    throw ConfigError("stft_inverse: empty tensor");
  }
  const int n_fft = spec.config.n_fft;
  const int hop = spec.config.hop;
  const int bins = spec.config.bins();
  const int frames = spec.frames();
  for (const auto& ch : spec.channels) {
    if (ch.rows() != bins || ch.cols() != frames) {
      throw ConfigError("stft_inverse: channel shape mismatch");
    }
  }
  if (spec.signal_length < 1) {
    throw ConfigError("stft_inverse: tensor does not record a signal length");
  }

  const Eigen::VectorXd window = sqrt_hann_window(n_fft);
  const int pad = n_fft - hop;
  const auto total_len =
      static_cast<Eigen::Index>(frames - 1) * hop + static_cast<Eigen::Index>(n_fft);

  MultichannelAudio audio;
  audio.sample_rate_hz = spec.config.sample_rate_hz;
  audio.samples.resize(static_cast<Eigen::Index>(spec.channels.size()), spec.signal_length);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> full(static_cast<std::size_t>(n_fft));
  std::vector<std::complex<double>> time(static_cast<std::size_t>(n_fft));

  Eigen::VectorXd acc(total_len);
  Eigen::VectorXd wsum(total_len);
  for (std::size_t ch = 0; ch < spec.channels.size(); ++ch) {
    acc.setZero();
    wsum.setZero();
    const Eigen::MatrixXcd& tensor = spec.channels[ch];
    for (int t = 0; t < frames; ++t) {
      for (int b = 0; b < bins; ++b) {
        full[static_cast<std::size_t>(b)] = tensor(b, t);
      }
      for (int b = 1; b < n_fft / 2; ++b) {
        full[static_cast<std::size_t>(n_fft - b)] = std::conj(tensor(b, t));
      }
      fft.inv(time, full);
      const auto start = static_cast<Eigen::Index>(t) * hop;
      for (int n = 0; n < n_fft; ++n) {
        acc[start + n] += window[n] * time[static_cast<std::size_t>(n)].real();
        wsum[start + n] += window[n] * window[n];
      }
    }
    for (Eigen::Index i = 0; i < spec.signal_length; ++i) {
      const double denom = wsum[pad + i];
      audio.samples(static_cast<Eigen::Index>(ch), i) =
          denom > 1e-12 ? acc[pad + i] / denom : 0.0;
    }
  }
  return audio;
}

}  // namespace sectorbeam
