// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sectorbeam/audio.hpp"
#include "sectorbeam/designer.hpp"
#include "sectorbeam/stft.hpp"

namespace sectorbeam {

/// Beam magnitudes in dB over (elevation, azimuth, bin). dB values use a
/// floor of 20*log10(1e-12) = -240 dB.
struct PatternMap {
  std::vector<double> elevations_deg;
  double azimuth_step_deg = 1.0;
  std::vector<double> freq_axis_hz;
  std::vector<Eigen::MatrixXd> magnitudes_db;  // [elevation](azimuth x bins)

  int azimuth_points() const {
    return magnitudes_db.empty() ? 0 : static_cast<int>(magnitudes_db.front().rows());
  }
};

/// STFT -> per-bin w_s^H x -> inverse STFT. Output has one channel per
/// sector and the same length as the input.
MultichannelAudio apply_bank(const MultichannelAudio& audio, const BeamformerBank& bank,
                             const StftConfig& cfg);

/// Beam response magnitudes for one sector over an azimuth sweep at the
/// listed elevations, for every bin of the bank.
PatternMap export_pattern(const BeamformerBank& bank, int sector_index,
                          const std::vector<double>& elevations_deg,
                          double azimuth_step_deg);

/// CSV schema: elevation_deg,azimuth_deg,freq_hz,magnitude_db with azimuth
/// ascending fastest, then frequency, then elevation.
void write_pattern_csv(const PatternMap& map, const std::string& path);
PatternMap read_pattern_csv(const std::string& path);

/// JSON sidecar written next to an output WAV: bank digest, sector labels
/// and a config echo.
void write_apply_sidecar(const std::string& wav_path, const std::string& bank_path,
                         const BeamformerBank& bank, const StftConfig& cfg);

}  // namespace sectorbeam
