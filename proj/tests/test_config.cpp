// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "sectorbeam/config.hpp"
#include "sectorbeam/wav.hpp"

using namespace sectorbeam;

namespace {

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "sectorbeam_config_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = (temp_dir() / name).string();
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("load_tool_config") {
  SUBCASE("defaults with paper4 preset") {
    const auto path = write_file("ok.json", R"({
      "geometry": {"type": "circular", "num_mics": 8, "radius_m": 0.1},
      "sectors": {"preset": "paper4"}
    })");
    const ToolConfig cfg = load_tool_config(path);
    CHECK(cfg.geometry.channels() == 8);
    REQUIRE(cfg.sectors.size() == 4);
    CHECK(cfg.sectors[1].azimuth_start_deg == 45.0);
    CHECK(cfg.design.n_fft == 512);
    CHECK(cfg.stft.hop == 256);
    CHECK(cfg.ctx.speed_of_sound_mps == 343.0);
  }

  SUBCASE("explicit geometry and custom sectors") {
    const auto path = write_file("explicit.json", R"({
      "geometry": {"type": "explicit", "mics": [[0,0,0],[0.05,0,0]], "name": "pair"},
      "sectors": {"list": [
        {"azimuth_start_deg": 0, "azimuth_end_deg": 180,
         "elevation_min_deg": 0, "elevation_max_deg": 45, "label": "front"},
        {"azimuth_start_deg": 180, "azimuth_end_deg": 360,
         "elevation_min_deg": 0, "elevation_max_deg": 45}
      ]},
      "design": {"n_fft": 256, "angle_step_deg": 2.0, "diagonal_loading": 1e-5,
                 "weighting_mode": "verbatim_azimuth_cosine",
                 "speed_of_sound_mps": 340.0, "sample_rate_hz": 8000.0},
      "stft": {"hop": 64}
    })");
    const ToolConfig cfg = load_tool_config(path);
    CHECK(cfg.geometry.name == "pair");
    CHECK(cfg.sectors[0].label == "front");
    CHECK(cfg.sectors[1].label == "sector_2");
    CHECK(cfg.design.weighting_mode == WeightingMode::verbatim_azimuth_cosine);
    CHECK(cfg.ctx.speed_of_sound_mps == 340.0);
    CHECK(cfg.stft.hop == 64);
    CHECK(cfg.stft.sample_rate_hz == 8000.0);
  }

  SUBCASE("unknown keys are rejected with their path") {
    const auto path = write_file("unknown.json", R"({
      "geometry": {"type": "circular", "num_mics": 4, "radios_m": 0.1},
      "sectors": {"preset": "paper4"}
    })");
    CHECK_THROWS_WITH_AS(load_tool_config(path), doctest::Contains("radios_m"),
                         ConfigError);
  }

  SUBCASE("invalid elevation names the sector entry") {
    const auto path = write_file("badelev.json", R"({
      "geometry": {"type": "circular", "num_mics": 4},
      "sectors": {"list": [
        {"azimuth_start_deg": 0, "azimuth_end_deg": 90,
         "elevation_min_deg": 10, "elevation_max_deg": 95}
      ]}
    })");
    CHECK_THROWS_WITH_AS(load_tool_config(path), doctest::Contains("list[0]"),
                         ConfigError);
  }

  SUBCASE("parse errors carry line and column") {
    const auto path = write_file("syntax.json", "{\n  \"geometry\": {,}\n}\n");
    CHECK_THROWS_WITH_AS(load_tool_config(path), doctest::Contains(":2:"), ConfigError);
  }

  SUBCASE("invariants are enforced on load") {
    const auto bad_step = write_file("step.json", R"({
      "geometry": {"type": "circular", "num_mics": 4},
      "sectors": {"preset": "paper4"},
      "design": {"angle_step_deg": 7.0}
    })");
    CHECK_THROWS_AS(load_tool_config(bad_step), ConfigError);

    const auto bad_nfft = write_file("nfft.json", R"({
      "geometry": {"type": "circular", "num_mics": 4},
      "sectors": {"preset": "paper4"},
      "design": {"n_fft": 500}
    })");
    CHECK_THROWS_AS(load_tool_config(bad_nfft), ConfigError);
  }
}

TEST_CASE("load_scene_config") {
  SUBCASE("synthetic sources") {
    const auto path = write_file("scene.json", R"({
      "sample_rate_hz": 16000,
      "geometry": {"type": "circular", "num_mics": 8, "radius_m": 0.1},
      "noise_level": 0.05,
      "seed": 7,
      "sources": [
        {"azimuth_deg": 90, "elevation_deg": 35, "gain": 1.0,
         "signal": {"kind": "speech_noise", "duration_s": 0.5, "seed": 3}},
        {"azimuth_deg": 270, "elevation_deg": 35,
         "signal": {"kind": "sine", "freq_hz": 440, "duration_s": 0.5}}
      ]
    })");
    const SceneConfig scene = load_scene_config(path);
    CHECK(scene.spec.sources.size() == 2);
    CHECK(scene.spec.sources[0].signal.size() == 8000);
    CHECK(scene.spec.sources[1].gain == 1.0);
    CHECK(scene.spec.seed == 7);
    CHECK(scene.stft.n_fft == 512);
  }

  SUBCASE("wav sources resolve relative to the config") {
    MultichannelAudio tone;
    tone.sample_rate_hz = 16000.0;
    tone.samples = Eigen::MatrixXd::Random(1, 2000);
    write_wav((temp_dir() / "tone.wav").string(), tone, WavFormat::float32);

    const auto path = write_file("scene_wav.json", R"({
      "geometry": {"type": "circular", "num_mics": 4},
      "sources": [
        {"azimuth_deg": 10, "elevation_deg": 30,
         "signal": {"kind": "wav", "path": "tone.wav"}},
        {"azimuth_deg": 200, "elevation_deg": 30,
         "signal": {"kind": "sine", "freq_hz": 200, "duration_s": 0.1}}
      ]
    })");
    const SceneConfig scene = load_scene_config(path);
    CHECK(scene.spec.sources[0].signal.size() == 2000);
  }

  SUBCASE("no sources is rejected") {
    const auto path = write_file("noso.json", R"({
      "geometry": {"type": "circular", "num_mics": 4},
      "sources": []
    })");
    CHECK_THROWS_AS(load_scene_config(path), ConfigError);
  }

  SUBCASE("source elevation outside range is rejected with its path") {
    const auto path = write_file("badsrc.json", R"({
      "geometry": {"type": "circular", "num_mics": 4},
      "sources": [
        {"azimuth_deg": 10, "elevation_deg": 120,
         "signal": {"kind": "sine", "freq_hz": 100, "duration_s": 0.1}}
      ]
    })");
    CHECK_THROWS_WITH_AS(load_scene_config(path), doctest::Contains("sources[0]"),
                         ConfigError);
  }
}
