// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "sectorbeam/audio.hpp"
#include "sectorbeam/designer.hpp"
#include "sectorbeam/geometry.hpp"
#include "sectorbeam/stft.hpp"

namespace sectorbeam {

struct SceneSource {
  Direction direction;
  std::vector<double> signal;  // mono samples at the scene sample rate
  double gain = 1.0;
};

/// Anechoic far-field scene: plane-wave sources plus white Gaussian noise.
struct SceneSpec {
  std::vector<SceneSource> sources;
  double noise_level = 0.0;  // noise RMS, linear
  ArrayGeometry geometry;
  WaveContext ctx;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Renders each source through its steering vector in the STFT domain
/// (frequency-domain fractional delays, model-consistent with the designer),
/// sums sources, adds seeded noise. Deterministic for a fixed spec.
MultichannelAudio render_scene(const SceneSpec& spec, const StftConfig& cfg);

/// SIR improvement of the beam output for the sector containing the target
/// source, relative to reference channel 0, band-limited to 300-4000 Hz.
/// Capped at +/-120 dB.
double sector_sir_gain(const SceneSpec& spec, const BeamformerBank& bank,
                       int target_source_index, const StftConfig& cfg);

/// White Gaussian noise shaped to a speech-like long-term spectrum
/// (flat below ~500 Hz, -6 dB/octave above, high-passed at 100 Hz),
/// normalized to unit RMS. Deterministic for a fixed seed.
std::vector<double> speech_shaped_noise(std::size_t num_samples, double sample_rate_hz,
                                        std::uint64_t seed);

}  // namespace sectorbeam
