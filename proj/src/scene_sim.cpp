// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#include "sectorbeam/scene_sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "sectorbeam/metrics.hpp"
#include "sectorbeam/pipeline.hpp"

namespace sectorbeam {

void SceneSpec::validate() const {
  if (sources.empty()) {
    throw ConfigError("scene: at least one source required");
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i].gain < 0.0) {
      throw ConfigError("scene: source " + std::to_string(i) + " has negative gain");
    }
    if (sources[i].signal.empty()) {
      throw ConfigError("scene: source " + std::to_string(i) + " has an empty signal");
    }
  }
  if (noise_level < 0.0) {
    throw ConfigError("scene: noise_level must be >= 0");
  }
  if (geometry.channels() < 1) {
    throw ConfigError("scene: geometry has no microphones");
  }
}

namespace {

// Box-Muller on top of mt19937_64; std::normal_distribution is
// implementation-defined, this keeps renders reproducible everywhere.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

 private:
  double uniform() {
    return (engine_() >> 11) * 0x1.0p-53;  // 53-bit mantissa in [0, 1)
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

MultichannelAudio render_scene(const SceneSpec& spec, const StftConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (cfg.sample_rate_hz != spec.ctx.sample_rate_hz) {
    throw ConfigError("render_scene: stft sample rate " +
                      std::to_string(cfg.sample_rate_hz) +
                      " Hz differs from scene sample rate " +
                      std::to_string(spec.ctx.sample_rate_hz) + " Hz");
  }

  Eigen::Index length = 0;
  for (const auto& src : spec.sources) {
    length = std::max(length, static_cast<Eigen::Index>(src.signal.size()));
  }
  const auto channels = static_cast<Eigen::Index>(spec.geometry.channels());

  SpectrogramTensor mix;
  bool mix_initialized = false;

  for (const auto& src : spec.sources) {
    MultichannelAudio mono;
    mono.sample_rate_hz = cfg.sample_rate_hz;
    mono.samples = Eigen::MatrixXd::Zero(1, length);
    for (std::size_t n = 0; n < src.signal.size(); ++n) {
      mono.samples(0, static_cast<Eigen::Index>(n)) = src.gain * src.signal[n];
    }
    const SpectrogramTensor spec_mono = stft_forward(mono, cfg);

    if (!mix_initialized) {
      mix.config = cfg;
      mix.signal_length = spec_mono.signal_length;
      mix.channels.assign(static_cast<std::size_t>(channels),
                          Eigen::MatrixXcd::Zero(cfg.bins(), spec_mono.frames()));
      mix_initialized = true;
    }

    for (int b = 0; b < cfg.bins(); ++b) {
      const Eigen::VectorXcd d = steering_vector(
          spec.geometry, src.direction, cfg.bin_freq_hz(b), spec.ctx);
      for (Eigen::Index i = 0; i < channels; ++i) {
        mix.channels[static_cast<std::size_t>(i)].row(b) +=
            d[i] * spec_mono.channels[0].row(b);
      }
    }
  }

  MultichannelAudio audio = stft_inverse(mix);
  if (spec.noise_level > 0.0) {
    GaussianRng rng(spec.seed);
    for (Eigen::Index i = 0; i < channels; ++i) {
      for (Eigen::Index t = 0; t < audio.length(); ++t) {
        audio.samples(i, t) += spec.noise_level * rng.next();
      }
    }
  }
  return audio;
}

namespace {

std::vector<double> channel_vector(const MultichannelAudio& audio, Eigen::Index ch) {
  std::vector<double> out(static_cast<std::size_t>(audio.length()));
  for (Eigen::Index t = 0; t < audio.length(); ++t) {
    out[static_cast<std::size_t>(t)] = audio.samples(ch, t);
  }
  return out;
}

}  // namespace

double sector_sir_gain(const SceneSpec& spec, const BeamformerBank& bank,
                       int target_source_index, const StftConfig& cfg) {
  spec.validate();
  if (spec.sources.size() < 2) {
    throw ConfigError("sector_sir_gain: scene needs at least two sources");
  }
  if (target_source_index < 0 ||
      target_source_index >= static_cast<int>(spec.sources.size())) {
    throw ConfigError("sector_sir_gain: target source index out of range");
  }
  if (spec.geometry.channels() != bank.channels()) {
    throw ConfigError("sector_sir_gain: scene geometry and bank channel counts differ");
  }

  const Direction& target_dir =
      spec.sources[static_cast<std::size_t>(target_source_index)].direction;
  int sector_index = -1;
  for (int s = 0; s < bank.sector_count(); ++s) {
    if (bank.sectors[static_cast<std::size_t>(s)].contains(target_dir)) {
      sector_index = s;
      break;
    }
  }
  if (sector_index < 0) {
    throw ProcessingError("sector_sir_gain: target direction (azimuth " +
                          std::to_string(target_dir.azimuth_deg) + ", elevation " +
                          std::to_string(target_dir.elevation_deg) +
                          ") is not inside any sector");
  }

  SceneSpec target_only = spec;
  target_only.noise_level = 0.0;
  target_only.sources = {spec.sources[static_cast<std::size_t>(target_source_index)]};

  SceneSpec interferers_only = spec;
  interferers_only.noise_level = 0.0;
  interferers_only.sources.clear();
  for (std::size_t i = 0; i < spec.sources.size(); ++i) {
    if (static_cast<int>(i) != target_source_index) {
      interferers_only.sources.push_back(spec.sources[i]);
    }
  }

  const MultichannelAudio ref_target = render_scene(target_only, cfg);
  const MultichannelAudio ref_interf = render_scene(interferers_only, cfg);
  if (ref_interf.samples.cwiseAbs().maxCoeff() == 0.0) {
    return 120.0;  // no interference at all: the gain sentinel
  }
  const MultichannelAudio beam_target = apply_bank(ref_target, bank, cfg);
  const MultichannelAudio beam_interf = apply_bank(ref_interf, bank, cfg);

  const std::pair<double, double> band{300.0, 4000.0};
  const double beam_sir =
      power_ratio_db(channel_vector(beam_target, sector_index),
                     channel_vector(beam_interf, sector_index), band,
                     cfg.sample_rate_hz);
  const double ref_sir =
      power_ratio_db(channel_vector(ref_target, 0), channel_vector(ref_interf, 0),
                     band, cfg.sample_rate_hz);
  const double gain = beam_sir - ref_sir;
  return std::clamp(gain, -120.0, 120.0);
}

std::vector<double> speech_shaped_noise(std::size_t num_samples, double sample_rate_hz,
                                        std::uint64_t seed) {
  if (num_samples == 0) {
    throw ConfigError("speech_shaped_noise: num_samples must be > 0");
  }
  MultichannelAudio white;
  white.sample_rate_hz = sample_rate_hz;
  white.samples.resize(1, static_cast<Eigen::Index>(num_samples));
  GaussianRng rng(seed);
  for (Eigen::Index t = 0; t < white.samples.cols(); ++t) {
    white.samples(0, t) = rng.next();
  }

  StftConfig cfg;
  cfg.sample_rate_hz = sample_rate_hz;
  SpectrogramTensor spec = stft_forward(white, cfg);
  for (int b = 0; b < cfg.bins(); ++b) {
    const double f = cfg.bin_freq_hz(b);
    // flat to ~500 Hz then -6 dB/octave, high-passed below 100 Hz
    double gain = 500.0 / (500.0 + f);
    if (f < 100.0) gain *= f / 100.0;
    spec.channels[0].row(b) *= gain;
  }
  MultichannelAudio shaped = stft_inverse(spec);

  const double rms = std::sqrt(shaped.samples.row(0).squaredNorm() /
                               static_cast<double>(num_samples));
  std::vector<double> out(num_samples);
  for (std::size_t n = 0; n < num_samples; ++n) {
    out[n] = shaped.samples(0, static_cast<Eigen::Index>(n)) / (rms > 0.0 ? rms : 1.0);
  }
  return out;
}

}  // namespace sectorbeam
