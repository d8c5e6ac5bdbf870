// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#include "sectorbeam/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sectorbeam/wav.hpp"

namespace sectorbeam {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based; convert to line:column for the message
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": " + e.what());
  }
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) {
    throw ConfigError(where + ": expected an object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (allowed.find(key) == allowed.end()) {
      throw ConfigError(where + "." + key + ": unknown key");
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(where + "." + key + ": required key missing");
  }
  return *it;
}

double get_num(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

double get_num_or(const json& obj, const char* key, double fallback,
                  const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return it->get<double>();
}

int get_int_or(const json& obj, const char* key, int fallback, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) {
    throw ConfigError(where + "." + key + ": expected an integer");
  }
  return it->get<int>();
}

std::string get_str(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

template <typename Fn>
auto contextualize(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

ArrayGeometry parse_geometry(const json& obj, const std::string& where) {
  check_keys(obj, {"type", "num_mics", "radius_m", "first_mic_azimuth_deg", "mics", "name"},
             where);
  const std::string type = get_str(obj, "type", where);
  if (type == "circular") {
    const int num_mics = get_int_or(obj, "num_mics", -1, where);
    if (num_mics < 1) {
      throw ConfigError(where + ".num_mics: must be an integer >= 1");
    }
    const double radius = get_num_or(obj, "radius_m", 0.1, where);
    const double first = get_num_or(obj, "first_mic_azimuth_deg", 0.0, where);
    if (obj.contains("mics")) {
      throw ConfigError(where + ".mics: not allowed for type=circular");
    }
    return contextualize(where, [&] { return circular_array(num_mics, radius, first); });
  }
  if (type == "explicit") {
    const json& mics = require(obj, "mics", where);
    if (!mics.is_array() || mics.empty()) {
      throw ConfigError(where + ".mics: expected a non-empty array of [x, y, z]");
    }
    std::vector<Eigen::Vector3d> positions;
    for (std::size_t i = 0; i < mics.size(); ++i) {
      const json& m = mics[i];
      const std::string mic_where = where + ".mics[" + std::to_string(i) + "]";
      if (!m.is_array() || m.size() != 3 || !m[0].is_number() || !m[1].is_number() ||
          !m[2].is_number()) {
        throw ConfigError(mic_where + ": expected [x, y, z] numbers");
      }
      positions.emplace_back(m[0].get<double>(), m[1].get<double>(), m[2].get<double>());
    }
    std::string name = obj.value("name", std::string("explicit"));
    return contextualize(where,
                         [&] { return ArrayGeometry(std::move(positions), name); });
  }
  throw ConfigError(where + ".type: expected 'circular' or 'explicit'");
}

std::vector<AngularSector> parse_sectors(const json& obj, const std::string& where) {
  check_keys(obj, {"preset", "list"}, where);
  if (obj.contains("preset")) {
    if (obj.contains("list")) {
      throw ConfigError(where + ": give either preset or list, not both");
    }
    const std::string preset = get_str(obj, "preset", where);
    if (preset != "paper4") {
      throw ConfigError(where + ".preset: unknown preset '" + preset + "'");
    }
    return four_sector_layout();
  }
  const json& list = require(obj, "list", where);
  if (!list.is_array() || list.empty()) {
    throw ConfigError(where + ".list: expected a non-empty array of sectors");
  }
  std::vector<AngularSector> sectors;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string s_where = where + ".list[" + std::to_string(i) + "]";
    const json& s = list[i];
    check_keys(s,
               {"azimuth_start_deg", "azimuth_end_deg", "elevation_min_deg",
                "elevation_max_deg", "label"},
               s_where);
    const double az_start = get_num(s, "azimuth_start_deg", s_where);
    const double az_end = get_num(s, "azimuth_end_deg", s_where);
    const double el_min = get_num(s, "elevation_min_deg", s_where);
    const double el_max = get_num(s, "elevation_max_deg", s_where);
    std::string label = s.value("label", "sector_" + std::to_string(i + 1));
    sectors.push_back(contextualize(s_where, [&] {
      return AngularSector(az_start, az_end, el_min, el_max, label);
    }));
  }
  return sectors;
}

}  // namespace

ToolConfig load_tool_config(const std::string& path) {
  const json root = load_json(path);
  check_keys(root, {"geometry", "sectors", "design", "stft"}, path);

  ToolConfig cfg;
  cfg.geometry = parse_geometry(require(root, "geometry", path), path + ": geometry");
  cfg.sectors = parse_sectors(require(root, "sectors", path), path + ": sectors");

  const std::string d_where = path + ": design";
  json design = root.value("design", json::object());
  check_keys(design,
             {"n_fft", "angle_step_deg", "diagonal_loading", "weighting_mode",
              "speed_of_sound_mps", "sample_rate_hz"},
             d_where);
  cfg.design.n_fft = get_int_or(design, "n_fft", 512, d_where);
  cfg.design.angle_step_deg = get_num_or(design, "angle_step_deg", 1.0, d_where);
  cfg.design.diagonal_loading = get_num_or(design, "diagonal_loading", 1e-6, d_where);
  cfg.design.sample_rate_hz = get_num_or(design, "sample_rate_hz", 16000.0, d_where);
  if (design.contains("weighting_mode")) {
    cfg.design.weighting_mode = contextualize(d_where + ".weighting_mode", [&] {
      return weighting_mode_from_string(get_str(design, "weighting_mode", d_where));
    });
  }
  contextualize(d_where, [&] {
    cfg.design.validate();
    return 0;
  });
  const double c = get_num_or(design, "speed_of_sound_mps", 343.0, d_where);
  cfg.ctx = contextualize(d_where, [&] {
    return WaveContext(cfg.design.sample_rate_hz, c);
  });

  const std::string s_where = path + ": stft";
  json stft = root.value("stft", json::object());
  check_keys(stft, {"hop"}, s_where);
  cfg.stft.n_fft = cfg.design.n_fft;
  cfg.stft.sample_rate_hz = cfg.design.sample_rate_hz;
  cfg.stft.hop = get_int_or(stft, "hop", cfg.design.n_fft / 2, s_where);
  contextualize(s_where, [&] {
    cfg.stft.validate();
    return 0;
  });
  return cfg;
}

SceneConfig load_scene_config(const std::string& path) {
  const json root = load_json(path);
  check_keys(root,
             {"sample_rate_hz", "speed_of_sound_mps", "geometry", "noise_level", "seed",
              "sources", "stft"},
             path);

  SceneConfig out;
  const double fs = get_num_or(root, "sample_rate_hz", 16000.0, path);
  const double c = get_num_or(root, "speed_of_sound_mps", 343.0, path);
  out.spec.ctx = contextualize(path, [&] { return WaveContext(fs, c); });
  out.spec.geometry = parse_geometry(require(root, "geometry", path), path + ": geometry");
  out.spec.noise_level = get_num_or(root, "noise_level", 0.0, path);
  if (root.contains("seed")) {
    if (!root["seed"].is_number_integer()) {
      throw ConfigError(path + ".seed: expected an integer");
    }
    out.spec.seed = root["seed"].get<std::uint64_t>();
  }

  const json& sources = require(root, "sources", path);
  if (!sources.is_array() || sources.empty()) {
    throw ConfigError(path + ".sources: expected a non-empty array");
  }
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const std::string s_where = path + ": sources[" + std::to_string(i) + "]";
    const json& s = sources[i];
    check_keys(s, {"azimuth_deg", "elevation_deg", "gain", "signal"}, s_where);
    SceneSource source;
    source.direction = contextualize(s_where, [&] {
      return Direction(get_num(s, "azimuth_deg", s_where),
                       get_num(s, "elevation_deg", s_where));
    });
    source.gain = get_num_or(s, "gain", 1.0, s_where);
    if (source.gain < 0.0) {
      throw ConfigError(s_where + ".gain: must be >= 0");
    }

    const json& sig = require(s, "signal", s_where);
    const std::string sig_where = s_where + ".signal";
    check_keys(sig, {"kind", "path", "duration_s", "seed", "freq_hz", "amplitude"},
               sig_where);
    const std::string kind = get_str(sig, "kind", sig_where);
    if (kind == "wav") {
      std::filesystem::path wav_path = get_str(sig, "path", sig_where);
      if (wav_path.is_relative()) wav_path = base / wav_path;
      const MultichannelAudio audio =
          contextualize(sig_where, [&] { return read_wav(wav_path.string()); });
      if (audio.sample_rate_hz != fs) {
        throw ConfigError(sig_where + ": '" + wav_path.string() + "' is sampled at " +
                          std::to_string(audio.sample_rate_hz) +
                          " Hz, scene expects " + std::to_string(fs) + " Hz");
      }
      source.signal.resize(static_cast<std::size_t>(audio.length()));
      for (Eigen::Index t = 0; t < audio.length(); ++t) {
        source.signal[static_cast<std::size_t>(t)] = audio.samples(0, t);
      }
    } else if (kind == "speech_noise") {
      const double duration = get_num(sig, "duration_s", sig_where);
      if (!(duration > 0.0)) {
        throw ConfigError(sig_where + ".duration_s: must be positive");
      }
      const auto seed = static_cast<std::uint64_t>(get_int_or(sig, "seed", 0, sig_where));
      source.signal = speech_shaped_noise(
          static_cast<std::size_t>(duration * fs), fs, seed);
    } else if (kind == "sine") {
      const double duration = get_num(sig, "duration_s", sig_where);
      const double freq = get_num(sig, "freq_hz", sig_where);
      const double amplitude = get_num_or(sig, "amplitude", 0.5, sig_where);
      if (!(duration > 0.0)) {
        throw ConfigError(sig_where + ".duration_s: must be positive");
      }
      const auto n = static_cast<std::size_t>(duration * fs);
      source.signal.resize(n);
      for (std::size_t t = 0; t < n; ++t) {
        source.signal[t] = amplitude * std::sin(2.0 * kPi * freq * t / fs);
      }
    } else {
      throw ConfigError(sig_where + ".kind: expected 'wav', 'speech_noise' or 'sine'");
    }
    out.spec.sources.push_back(std::move(source));
  }

  const std::string t_where = path + ": stft";
  json stft = root.value("stft", json::object());
  check_keys(stft, {"n_fft", "hop"}, t_where);
  out.stft.n_fft = get_int_or(stft, "n_fft", 512, t_where);
  out.stft.hop = get_int_or(stft, "hop", out.stft.n_fft / 2, t_where);
  out.stft.sample_rate_hz = fs;
  contextualize(t_where, [&] {
    out.stft.validate();
    return 0;
  });
  contextualize(path, [&] {
    out.spec.validate();
    return 0;
  });
  return out;
}

}  // namespace sectorbeam
