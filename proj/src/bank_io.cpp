// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#include "sectorbeam/bank_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace sectorbeam {

static_assert(std::endian::native == std::endian::little,
              "bank I/O assumes a little-endian host");

namespace {

constexpr char kMagic[7] = {'S', 'B', 'B', 'A', 'N', 'K', '1'};

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::ifstream& in, const std::string& path) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw ConfigError("load_bank: unexpected end of file in '" + path + "'");
  }
  return value;
}

std::string sidecar_path(const std::string& path) { return path + ".meta.json"; }

nlohmann::json sector_to_json(const AngularSector& s) {
  return {{"azimuth_start_deg", s.azimuth_start_deg},
          {"azimuth_end_deg", s.azimuth_end_deg},
          {"elevation_min_deg", s.elevation_min_deg},
          {"elevation_max_deg", s.elevation_max_deg},
          {"label", s.label}};
}

}  // namespace

void save_bank(const BeamformerBank& bank, const std::string& path, int stft_hop) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("save_bank: cannot open '" + path + "'");

  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(bank.config.n_fft));
  put<double>(out, bank.config.sample_rate_hz);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(bank.channels()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(bank.sector_count()));
  put<double>(out, bank.config.diagonal_loading);
  put<std::uint32_t>(out, bank.config.weighting_mode == WeightingMode::elevation_cosine
                              ? 0u
                              : 1u);
  for (int b = 0; b < bank.bins(); ++b) {
    const Eigen::MatrixXcd& w = bank.weights[static_cast<std::size_t>(b)];
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index s = 0; s < w.cols(); ++s) {
        put<double>(out, w(i, s).real());
        put<double>(out, w(i, s).imag());
      }
    }
  }
  if (!out) throw ConfigError("save_bank: write to '" + path + "' failed");
  out.close();

  nlohmann::json meta;
  meta["format"] = "sbbank-meta-v1";
  meta["geometry"] = nlohmann::json::object();
  meta["geometry"]["name"] = bank.geometry.name;
  nlohmann::json mics = nlohmann::json::array();
  for (const auto& m : bank.geometry.mics) {
    mics.push_back({m.x(), m.y(), m.z()});
  }
  meta["geometry"]["mics"] = mics;
  nlohmann::json sectors = nlohmann::json::array();
  for (const auto& s : bank.sectors) sectors.push_back(sector_to_json(s));
  meta["sectors"] = sectors;
  meta["design"] = {{"n_fft", bank.config.n_fft},
                    {"sample_rate_hz", bank.config.sample_rate_hz},
                    {"diagonal_loading", bank.config.diagonal_loading},
                    {"angle_step_deg", bank.config.angle_step_deg},
                    {"weighting_mode", to_string(bank.config.weighting_mode)}};
  meta["speed_of_sound_mps"] = bank.ctx.speed_of_sound_mps;
  if (stft_hop > 0) meta["stft_hop"] = stft_hop;

  std::ofstream side(sidecar_path(path));
  if (!side) {
    throw ConfigError("save_bank: cannot open '" + sidecar_path(path) + "'");
  }
  side << meta.dump(2) << '\n';
  if (!side) {
    throw ConfigError("save_bank: write to '" + sidecar_path(path) + "' failed");
  }
}

BankFile load_bank(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("load_bank: cannot open '" + path + "'");

  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ConfigError("load_bank: '" + path + "' is not a bank file (bad magic)");
  }
  const auto n_fft = take<std::uint32_t>(in, path);
  const auto sample_rate = take<double>(in, path);
  const auto channels = take<std::uint32_t>(in, path);
  const auto sector_count = take<std::uint32_t>(in, path);
  const auto loading = take<double>(in, path);
  const auto mode = take<std::uint32_t>(in, path);
  if (n_fft < 2 || n_fft > (1u << 24) || channels == 0 || channels > 4096 ||
      sector_count == 0 || sector_count > 4096 || mode > 1) {
    throw ConfigError("load_bank: invalid header in '" + path + "'");
  }

  std::ifstream side(sidecar_path(path));
  if (!side) {
    throw ConfigError("load_bank: missing sidecar '" + sidecar_path(path) +
                      "' (written by `design`; carries geometry and sectors)");
  }
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(side);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("load_bank: cannot parse sidecar '" + sidecar_path(path) +
                      "': " + e.what());
  }

  BankFile out;
  BeamformerBank& bank = out.bank;
  bank.config.n_fft = static_cast<int>(n_fft);
  bank.config.sample_rate_hz = sample_rate;
  bank.config.diagonal_loading = loading;
  bank.config.weighting_mode =
      mode == 0 ? WeightingMode::elevation_cosine : WeightingMode::verbatim_azimuth_cosine;

  try {
    std::vector<Eigen::Vector3d> mics;
    for (const auto& m : meta.at("geometry").at("mics")) {
      mics.emplace_back(m.at(0).get<double>(), m.at(1).get<double>(),
                        m.at(2).get<double>());
    }
    bank.geometry = ArrayGeometry(std::move(mics),
                                  meta.at("geometry").value("name", std::string()));
    for (const auto& s : meta.at("sectors")) {
      bank.sectors.emplace_back(
          s.at("azimuth_start_deg").get<double>(), s.at("azimuth_end_deg").get<double>(),
          s.at("elevation_min_deg").get<double>(), s.at("elevation_max_deg").get<double>(),
          s.value("label", std::string()));
    }
    bank.config.angle_step_deg = meta.at("design").at("angle_step_deg").get<double>();
    bank.ctx = WaveContext(sample_rate, meta.at("speed_of_sound_mps").get<double>());
    out.stft_hop = meta.value("stft_hop", 0);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("load_bank: malformed sidecar '" + sidecar_path(path) +
                      "': " + e.what());
  }

  if (bank.geometry.channels() != static_cast<int>(channels)) {
    throw ConfigError("load_bank: sidecar geometry has " +
                      std::to_string(bank.geometry.channels()) +
                      " mics but the bank header says " + std::to_string(channels));
  }
  if (bank.sector_count() != static_cast<int>(sector_count)) {
    throw ConfigError("load_bank: sidecar sector count differs from bank header");
  }

  const int bins = bank.config.bins();
  bank.weights.assign(static_cast<std::size_t>(bins),
                      Eigen::MatrixXcd(channels, sector_count));
  for (int b = 0; b < bins; ++b) {
    Eigen::MatrixXcd& w = bank.weights[static_cast<std::size_t>(b)];
    for (std::uint32_t i = 0; i < channels; ++i) {
      for (std::uint32_t s = 0; s < sector_count; ++s) {
        const double re = take<double>(in, path);
        const double im = take<double>(in, path);
        w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) = {re, im};
      }
    }
  }
  return out;
}

void export_bank_csv(const BeamformerBank& bank, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("export_bank_csv: cannot open '" + path + "'");
  out << "bin,freq_hz,sector,channel,real,imag\n";
  char buf[128];
  for (int b = 0; b < bank.bins(); ++b) {
    const Eigen::MatrixXcd& w = bank.weights[static_cast<std::size_t>(b)];
    for (Eigen::Index s = 0; s < w.cols(); ++s) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%ld,%ld,%.17g,%.17g", b,
                      bank.bin_freq_hz(b), static_cast<long>(s), static_cast<long>(i),
                      w(i, s).real(), w(i, s).imag());
        out << buf << '\n';
      }
    }
  }
  if (!out) throw ConfigError("export_bank_csv: write to '" + path + "' failed");
}

std::string file_digest_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("file_digest_hex: cannot open '" + path + "'");
  std::uint64_t hash = 1469598103934665603ull;  // FNV-1a offset basis
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ull;
    }
    if (in.eof()) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

}  // namespace sectorbeam
