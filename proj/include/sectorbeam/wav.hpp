// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "sectorbeam/audio.hpp"

namespace sectorbeam {

enum class WavFormat { pcm16, float32 };

/// Reads PCM 16-bit or IEEE float 32-bit RIFF/WAVE files, any channel count.
MultichannelAudio read_wav(const std::string& path);

/// Writes float WAV by default; float output avoids clipping.
void write_wav(const std::string& path, const MultichannelAudio& audio,
               WavFormat format = WavFormat::float32);

}  // namespace sectorbeam
