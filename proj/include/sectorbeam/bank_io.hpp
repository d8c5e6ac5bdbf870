// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "sectorbeam/designer.hpp"

namespace sectorbeam {

// Bank binary layout, little-endian:
//   magic "SBBANK1" (7 bytes), u32 n_fft, f64 sample_rate_hz, u32 channels,
//   u32 sectors, f64 diagonal_loading, u32 weighting_mode, then weights as
//   f64 (real, imag) pairs ordered bin-major, then channel, then sector.
// Geometry, sector bounds and the speed of sound travel in a JSON sidecar
// at <path>.meta.json; load_bank requires it.

struct BankFile {
  BeamformerBank bank;
  int stft_hop = 0;  // 0 when the sidecar does not record a hop
};

void save_bank(const BeamformerBank& bank, const std::string& path, int stft_hop = 0);
BankFile load_bank(const std::string& path);

/// CSV export with header bin,freq_hz,sector,channel,real,imag.
void export_bank_csv(const BeamformerBank& bank, const std::string& path);

/// FNV-1a 64-bit digest of a file, hex-encoded. Used to identify bank files
/// in sidecar metadata.
std::string file_digest_hex(const std::string& path);

}  // namespace sectorbeam
