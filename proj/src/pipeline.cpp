// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#include "sectorbeam/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sectorbeam/bank_io.hpp"

namespace sectorbeam {

MultichannelAudio apply_bank(const MultichannelAudio& audio, const BeamformerBank& bank,
                             const StftConfig& cfg) {
  cfg.validate();
  if (audio.channels() != bank.channels()) {
    throw ConfigError("apply_bank: input has " + std::to_string(audio.channels()) +
                      " channels but the bank expects " +
                      std::to_string(bank.channels()));
  }
  if (audio.sample_rate_hz != bank.config.sample_rate_hz) {
    throw ConfigError("apply_bank: input sample rate " +
                      std::to_string(audio.sample_rate_hz) + " Hz differs from bank " +
                      std::to_string(bank.config.sample_rate_hz) + " Hz");
  }
  if (cfg.n_fft != bank.config.n_fft) {
    throw ConfigError("apply_bank: stft n_fft " + std::to_string(cfg.n_fft) +
                      " differs from bank n_fft " + std::to_string(bank.config.n_fft));
  }

  const SpectrogramTensor spec = stft_forward(audio, cfg);
  const int bins = cfg.bins();
  const int frames = spec.frames();
  const auto channels = static_cast<Eigen::Index>(bank.channels());
  const auto sector_count = static_cast<Eigen::Index>(bank.sector_count());

  SpectrogramTensor out;
  out.config = cfg;
  out.signal_length = spec.signal_length;
  out.channels.assign(static_cast<std::size_t>(sector_count),
                      Eigen::MatrixXcd::Zero(bins, frames));

  Eigen::MatrixXcd x(channels, frames);
  for (int b = 0; b < bins; ++b) {
    for (Eigen::Index i = 0; i < channels; ++i) {
      x.row(i) = spec.channels[static_cast<std::size_t>(i)].row(b);
    }
    const Eigen::MatrixXcd y =
        bank.weights[static_cast<std::size_t>(b)].adjoint() * x;  // S x frames
    for (Eigen::Index s = 0; s < sector_count; ++s) {
      out.channels[static_cast<std::size_t>(s)].row(b) = y.row(s);
    }
  }
  return stft_inverse(out);
}

PatternMap export_pattern(const BeamformerBank& bank, int sector_index,
                          const std::vector<double>& elevations_deg,
                          double azimuth_step_deg) {
  if (sector_index < 0 || sector_index >= bank.sector_count()) {
    throw ConfigError("export_pattern: sector index " + std::to_string(sector_index) +
                      " out of range [0, " + std::to_string(bank.sector_count()) + ")");
  }
  if (elevations_deg.empty()) {
    throw ConfigError("export_pattern: elevation list is empty");
  }
  for (double e : elevations_deg) {
    if (!(e >= -90.0 && e <= 90.0)) {
      throw ConfigError("export_pattern: elevation " + std::to_string(e) +
                        " outside [-90, 90]");
    }
  }
  if (!(azimuth_step_deg > 0.0) || azimuth_step_deg > 360.0) {
    throw ConfigError("export_pattern: azimuth_step_deg must be in (0, 360]");
  }

  const int bins = bank.bins();
  const auto channels = static_cast<Eigen::Index>(bank.channels());
  const int az_points = static_cast<int>(std::ceil(360.0 / azimuth_step_deg - 1e-9));

  PatternMap map;
  map.elevations_deg = elevations_deg;
  map.azimuth_step_deg = azimuth_step_deg;
  map.freq_axis_hz.resize(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    map.freq_axis_hz[static_cast<std::size_t>(b)] = bank.bin_freq_hz(b);
  }
  map.magnitudes_db.assign(elevations_deg.size(), Eigen::MatrixXd(az_points, bins));

  const double c = bank.ctx.speed_of_sound_mps;
  Eigen::VectorXcd d(channels);
  for (std::size_t e = 0; e < elevations_deg.size(); ++e) {
    for (int a = 0; a < az_points; ++a) {
      const Direction dir(a * azimuth_step_deg, elevations_deg[e]);
      const Eigen::Vector3d k = unit_vector(dir);
      Eigen::VectorXd proj(channels);
      for (Eigen::Index i = 0; i < channels; ++i) {
        proj[i] = k.dot(bank.geometry.mics[static_cast<std::size_t>(i)]);
      }
      for (int b = 0; b < bins; ++b) {
        const double scale = -2.0 * kPi * bank.bin_freq_hz(b) / c;
        for (Eigen::Index i = 0; i < channels; ++i) {
          d[i] = std::polar(1.0, scale * proj[i]);
        }
        const std::complex<double> response =
            bank.weights[static_cast<std::size_t>(b)].col(sector_index).dot(d);
        map.magnitudes_db[e](a, b) = 20.0 * std::log10(std::abs(response) + 1e-12);
      }
    }
  }
  return map;
}

namespace {

// shortest representation that parses back to the same double
std::string format_double(double v) {
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

}  // namespace

void write_pattern_csv(const PatternMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_pattern_csv: cannot open '" + path + "'");
  out << "elevation_deg,azimuth_deg,freq_hz,magnitude_db\n";
  for (std::size_t e = 0; e < map.elevations_deg.size(); ++e) {
    const Eigen::MatrixXd& slab = map.magnitudes_db[e];
    for (Eigen::Index b = 0; b < slab.cols(); ++b) {
      for (Eigen::Index a = 0; a < slab.rows(); ++a) {
        out << format_double(map.elevations_deg[e]) << ','
            << format_double(static_cast<double>(a) * map.azimuth_step_deg) << ','
            << format_double(map.freq_axis_hz[static_cast<std::size_t>(b)]) << ','
            << format_double(slab(a, b)) << '\n';
      }
    }
  }
  if (!out) throw ConfigError("write_pattern_csv: write to '" + path + "' failed");
}

PatternMap read_pattern_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("read_pattern_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "elevation_deg,azimuth_deg,freq_hz,magnitude_db") {
    throw ConfigError("read_pattern_csv: bad header in '" + path + "'");
  }

  struct Row {
    double elevation, azimuth, freq, db;
  };
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Row r{};
    char extra;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf%c", &r.elevation, &r.azimuth,
                    &r.freq, &r.db, &extra) != 4) {
      throw ConfigError("read_pattern_csv: malformed row at line " +
                        std::to_string(line_no));
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw ConfigError("read_pattern_csv: no data rows");

  PatternMap map;
  for (const Row& r : rows) {
    if (map.elevations_deg.empty() || map.elevations_deg.back() != r.elevation) {
      if (std::find(map.elevations_deg.begin(), map.elevations_deg.end(), r.elevation) ==
          map.elevations_deg.end()) {
        map.elevations_deg.push_back(r.elevation);
      }
    }
  }
  std::vector<double> azimuths;
  for (const Row& r : rows) {
    if (r.elevation == map.elevations_deg.front() && r.freq == rows.front().freq) {
      azimuths.push_back(r.azimuth);
    }
  }
  for (const Row& r : rows) {
    if (r.elevation == map.elevations_deg.front() && r.azimuth == rows.front().azimuth) {
      map.freq_axis_hz.push_back(r.freq);
    }
  }
  map.azimuth_step_deg = azimuths.size() > 1 ? azimuths[1] - azimuths[0] : 360.0;

  const auto az_points = static_cast<Eigen::Index>(azimuths.size());
  const auto bins = static_cast<Eigen::Index>(map.freq_axis_hz.size());
  if (rows.size() != map.elevations_deg.size() * static_cast<std::size_t>(az_points) *
                         static_cast<std::size_t>(bins)) {
    throw ConfigError("read_pattern_csv: row count does not match grid shape");
  }
  map.magnitudes_db.assign(map.elevations_deg.size(), Eigen::MatrixXd(az_points, bins));
  std::size_t idx = 0;
  for (std::size_t e = 0; e < map.elevations_deg.size(); ++e) {
    for (Eigen::Index b = 0; b < bins; ++b) {
      for (Eigen::Index a = 0; a < az_points; ++a) {
        map.magnitudes_db[e](a, b) = rows[idx++].db;
      }
    }
  }
  return map;
}

void write_apply_sidecar(const std::string& wav_path, const std::string& bank_path,
                         const BeamformerBank& bank, const StftConfig& cfg) {
  nlohmann::json meta;
  meta["bank_file"] = bank_path;
  meta["bank_digest_fnv1a64"] = file_digest_hex(bank_path);
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& sector : bank.sectors) labels.push_back(sector.label);
  meta["sector_labels"] = labels;
  meta["config"] = {
      {"n_fft", cfg.n_fft},
      {"hop", cfg.hop},
      {"sample_rate_hz", cfg.sample_rate_hz},
      {"diagonal_loading", bank.config.diagonal_loading},
      {"angle_step_deg", bank.config.angle_step_deg},
      {"weighting_mode", to_string(bank.config.weighting_mode)},
      {"speed_of_sound_mps", bank.ctx.speed_of_sound_mps},
      {"channels", bank.channels()},
      {"sectors", bank.sector_count()},
  };
  const std::string path = wav_path + ".meta.json";
  std::ofstream out(path);
  if (!out) throw ConfigError("write_apply_sidecar: cannot open '" + path + "'");
  out << meta.dump(2) << '\n';
}

}  // namespace sectorbeam
