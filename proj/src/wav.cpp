// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#include "sectorbeam/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace sectorbeam {

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

template <typename T>
T read_le(std::ifstream& in, const std::string& path) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw ConfigError("read_wav: unexpected end of file in '" + path + "'");
  }
  return value;
}

template <typename T>
void write_le(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

MultichannelAudio read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("read_wav: cannot open '" + path + "'");

  char riff[4], wave[4];
  in.read(riff, 4);
  read_le<std::uint32_t>(in, path);  // overall size, unused
  in.read(wave, 4);
  if (!in || std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(wave, "WAVE", 4) != 0) {
    throw ConfigError("read_wav: '" + path + "' is not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::vector<char> data;
  bool have_fmt = false, have_data = false;

  while (in.peek() != EOF) {
    char id[4];
    if (!in.read(id, 4)) break;
    const auto size = read_le<std::uint32_t>(in, path);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      format = read_le<std::uint16_t>(in, path);
      channels = read_le<std::uint16_t>(in, path);
      rate = read_le<std::uint32_t>(in, path);
      read_le<std::uint32_t>(in, path);  // byte rate
      read_le<std::uint16_t>(in, path);  // block align
      bits = read_le<std::uint16_t>(in, path);
      if (size > 16) in.seekg(size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data.resize(size);
      if (!in.read(data.data(), size)) {
        throw ConfigError("read_wav: truncated data chunk in '" + path + "'");
      }
      have_data = true;
    } else {
      in.seekg(size, std::ios::cur);
    }
    if (size % 2 == 1) in.seekg(1, std::ios::cur);  // chunk padding
  }

  if (!have_fmt || !have_data) {
    throw ConfigError("read_wav: missing fmt or data chunk in '" + path + "'");
  }
  if (channels < 1 || rate == 0) {
    throw ConfigError("read_wav: invalid fmt chunk in '" + path + "'");
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw ConfigError("read_wav: unsupported format in '" + path +
                      "' (PCM 16-bit or IEEE float 32-bit required)");
  }

  const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::size_t total = data.size() / (bytes_per_sample * channels);

  MultichannelAudio audio;
  audio.sample_rate_hz = rate;
  audio.samples.resize(channels, static_cast<Eigen::Index>(total));
  const char* p = data.data();
  for (std::size_t t = 0; t < total; ++t) {
    for (std::uint16_t ch = 0; ch < channels; ++ch) {
      double v;
      if (pcm16) {
        std::int16_t s;
        std::memcpy(&s, p, 2);
        p += 2;
        v = s / 32768.0;
      } else {
        float f;
        std::memcpy(&f, p, 4);
        p += 4;
        v = f;
      }
      audio.samples(ch, static_cast<Eigen::Index>(t)) = v;
    }
  }
  return audio;
}

void write_wav(const std::string& path, const MultichannelAudio& audio,
               WavFormat format) {
  if (audio.channels() < 1) {
    throw ConfigError("write_wav: audio has no channels");
  }
  if (!audio.samples.allFinite()) {
    throw ConfigError("write_wav: audio contains non-finite samples");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("write_wav: cannot open '" + path + "'");

  const auto channels = static_cast<std::uint16_t>(audio.channels());
  const auto rate = static_cast<std::uint32_t>(std::lround(audio.sample_rate_hz));
  const bool pcm = format == WavFormat::pcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint16_t block = static_cast<std::uint16_t>(channels * bits / 8);
  const auto frames = static_cast<std::uint32_t>(audio.length());
  const std::uint32_t data_size = frames * block;
  // float WAVs carry a fact chunk per the RIFF spec for non-PCM formats
  const std::uint32_t riff_size = 4 + (8 + 16) + (pcm ? 0 : 8 + 4) + 8 + data_size;

  out.write("RIFF", 4);
  write_le(out, riff_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_le<std::uint32_t>(out, 16);
  write_le<std::uint16_t>(out, pcm ? kFormatPcm : kFormatFloat);
  write_le(out, channels);
  write_le(out, rate);
  write_le<std::uint32_t>(out, rate * block);
  write_le(out, block);
  write_le(out, bits);
  if (!pcm) {
    out.write("fact", 4);
    write_le<std::uint32_t>(out, 4);
    write_le(out, frames);
  }
  out.write("data", 4);
  write_le(out, data_size);

  for (std::uint32_t t = 0; t < frames; ++t) {
    for (std::uint16_t ch = 0; ch < channels; ++ch) {
      const double v = audio.samples(ch, static_cast<Eigen::Index>(t));
      if (pcm) {
        const double clamped = std::clamp(v, -1.0, 32767.0 / 32768.0);
        const auto s = static_cast<std::int16_t>(std::lround(clamped * 32768.0));
        write_le(out, s);
      } else {
        write_le(out, static_cast<float>(v));
      }
    }
  }
  if (!out) throw ConfigError("write_wav: write to '" + path + "' failed");
}

}  // namespace sectorbeam
