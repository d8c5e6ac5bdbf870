// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <doctest.h>
#include <unsupported/Eigen/FFT>

#include "sectorbeam/metrics.hpp"
#include "sectorbeam/pipeline.hpp"
#include "sectorbeam/scene_sim.hpp"

using namespace sectorbeam;

namespace {

const WaveContext kCtx(16000.0, 343.0);

std::vector<double> sine(double freq, double seconds, double amplitude = 0.5) {
  std::vector<double> out(static_cast<std::size_t>(seconds * 16000.0));
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = amplitude * std::sin(2.0 * kPi * freq * static_cast<double>(t) / 16000.0);
  }
  return out;
}

double correlation_peak(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b,
                        int max_lag) {
  double best = 0.0;
  const double norm = a.norm() * b.norm();
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    const Eigen::Index n = a.size() - std::abs(lag);
    const Eigen::Index oa = lag >= 0 ? lag : 0;
    const Eigen::Index ob = lag >= 0 ? 0 : -lag;
    const double dot = a.segment(oa, n).dot(b.segment(ob, n));
    best = std::max(best, std::abs(dot) / norm);
  }
  return best;
}

}  // namespace

TEST_CASE("scene validation") {
  SceneSpec spec;
  spec.geometry = circular_array(4, 0.1, 0.0);
  spec.ctx = kCtx;
  CHECK_THROWS_AS(spec.validate(), ConfigError);  // no sources

  spec.sources.push_back({Direction(90, 30), sine(440, 0.1), 1.0});
  CHECK_NOTHROW(spec.validate());

  spec.noise_level = -1.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.noise_level = 0.0;
  spec.sources[0].gain = -0.5;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("channel at the array center reproduces the source") {
  StftConfig cfg;
  std::vector<Eigen::Vector3d> mics = circular_array(4, 0.1, 0.0).mics;
  mics.insert(mics.begin(), Eigen::Vector3d::Zero());
  SceneSpec spec;
  spec.geometry = ArrayGeometry(mics);
  spec.ctx = kCtx;
  spec.sources.push_back({Direction(123, 41), speech_shaped_noise(8000, 16000.0, 4), 1.0});

  const MultichannelAudio out = render_scene(spec, cfg);
  REQUIRE(out.channels() == 5);
  Eigen::RowVectorXd src(8000);
  for (int t = 0; t < 8000; ++t) src[t] = spec.sources[0].signal[static_cast<std::size_t>(t)];
  CHECK((out.samples.row(0) - src).norm() / src.norm() <= 1e-6);
}

TEST_CASE("unit-modulus steering preserves per-channel power") {
  StftConfig cfg;
  SceneSpec spec;
  spec.geometry = circular_array(8, 0.1, 0.0);
  spec.ctx = kCtx;
  spec.sources.push_back({Direction(77, 25), speech_shaped_noise(16000, 16000.0, 9), 1.0});

  const MultichannelAudio out = render_scene(spec, cfg);
  // compare on the interior; channel delays shift energy across the edges
  const Eigen::Index margin = 512;
  const auto interior = out.samples.middleCols(margin, out.length() - 2 * margin);
  const double reference = interior.row(0).squaredNorm();
  for (int c = 1; c < 8; ++c) {
    CHECK(interior.row(c).squaredNorm() == doctest::Approx(reference).epsilon(0.01));
  }
}

TEST_CASE("renders are deterministic and superpose") {
  StftConfig cfg;
  SceneSpec spec;
  spec.geometry = circular_array(4, 0.1, 0.0);
  spec.ctx = kCtx;
  spec.seed = 99;
  spec.noise_level = 0.1;
  spec.sources.push_back({Direction(90, 35), sine(500, 0.4), 1.0});
  spec.sources.push_back({Direction(270, 35), sine(800, 0.4), 0.7});

  SUBCASE("same seed, same bits") {
    const MultichannelAudio a = render_scene(spec, cfg);
    const MultichannelAudio b = render_scene(spec, cfg);
    CHECK(a.samples == b.samples);
  }

  SUBCASE("different seed, different noise") {
    SceneSpec other = spec;
    other.seed = 100;
    CHECK(render_scene(spec, cfg).samples != render_scene(other, cfg).samples);
  }

  SUBCASE("superposition without noise") {
    SceneSpec both = spec;
    both.noise_level = 0.0;
    SceneSpec only_a = both, only_b = both;
    only_a.sources = {both.sources[0]};
    only_b.sources = {both.sources[1]};
    const Eigen::MatrixXd sum =
        render_scene(only_a, cfg).samples + render_scene(only_b, cfg).samples;
    CHECK((render_scene(both, cfg).samples - sum).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("equal-power opposing sources give ~0 dB reference SIR") {
  StftConfig cfg;
  SceneSpec target_only, interf_only;
  for (SceneSpec* s : {&target_only, &interf_only}) {
    s->geometry = circular_array(8, 0.1, 0.0);
    s->ctx = kCtx;
  }
  target_only.sources.push_back({Direction(90, 30), speech_shaped_noise(32000, 16000.0, 1), 1.0});
  interf_only.sources.push_back({Direction(270, 30), speech_shaped_noise(32000, 16000.0, 2), 1.0});

  const MultichannelAudio rt = render_scene(target_only, cfg);
  const MultichannelAudio ri = render_scene(interf_only, cfg);
  std::vector<double> a(static_cast<std::size_t>(rt.length())), b(a.size());
  for (Eigen::Index t = 0; t < rt.length(); ++t) {
    a[static_cast<std::size_t>(t)] = rt.samples(0, t);
    b[static_cast<std::size_t>(t)] = ri.samples(0, t);
  }
  const double sir = power_ratio_db(a, b, {300.0, 4000.0}, 16000.0);
  CHECK(std::abs(sir) < 1.0);
}

TEST_CASE("single-source scene correlates best with its own sector output") {
  StftConfig cfg;
  DesignConfig dcfg;
  dcfg.angle_step_deg = 5.0;
  const ArrayGeometry geom = circular_array(8, 0.1, 0.0);
  const BeamformerBank bank = design_bank(geom, four_sector_layout(), dcfg, kCtx);

  SceneSpec spec;
  spec.geometry = geom;
  spec.ctx = kCtx;
  spec.sources.push_back({Direction(90, 35), speech_shaped_noise(16000, 16000.0, 5), 1.0});

  const MultichannelAudio beams = apply_bank(render_scene(spec, cfg), bank, cfg);
  Eigen::RowVectorXd src(16000);
  for (int t = 0; t < 16000; ++t) src[t] = spec.sources[0].signal[static_cast<std::size_t>(t)];

  std::vector<double> corr(4);
  for (int s = 0; s < 4; ++s) {
    corr[static_cast<std::size_t>(s)] = correlation_peak(beams.samples.row(s), src, 64);
  }
  CHECK(corr[1] > corr[0]);
  CHECK(corr[1] > corr[2]);
  CHECK(corr[1] > corr[3]);
}

TEST_CASE("sector_sir_gain") {
  StftConfig cfg;

  SUBCASE("channel-0 selector bank gives exactly zero gain") {
    BeamformerBank bank;
    bank.geometry = circular_array(4, 0.1, 0.0);
    bank.sectors = four_sector_layout();
    bank.config.n_fft = cfg.n_fft;
    bank.config.sample_rate_hz = 16000.0;
    bank.ctx = kCtx;
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(4, 4);
    for (int s = 0; s < 4; ++s) w(0, s) = 1.0;
    bank.weights.assign(static_cast<std::size_t>(cfg.bins()), w);

    SceneSpec spec;
    spec.geometry = bank.geometry;
    spec.ctx = kCtx;
    spec.sources.push_back({Direction(90, 35), speech_shaped_noise(8000, 16000.0, 11), 1.0});
    spec.sources.push_back({Direction(270, 35), speech_shaped_noise(8000, 16000.0, 12), 1.0});

    CHECK(std::abs(sector_sir_gain(spec, bank, 0, cfg)) < 1e-9);
  }

  SUBCASE("zero-gain interferer reports the +120 dB sentinel") {
    DesignConfig dcfg;
    dcfg.angle_step_deg = 10.0;
    const ArrayGeometry geom = circular_array(8, 0.1, 0.0);
    const BeamformerBank bank = design_bank(geom, four_sector_layout(), dcfg, kCtx);

    SceneSpec spec;
    spec.geometry = geom;
    spec.ctx = kCtx;
    spec.sources.push_back({Direction(90, 35), sine(500, 0.3), 1.0});
    spec.sources.push_back({Direction(270, 35), sine(900, 0.3), 0.0});
    CHECK(sector_sir_gain(spec, bank, 0, cfg) == 120.0);
  }

  SUBCASE("errors: too few sources, bad index, direction outside sectors") {
    DesignConfig dcfg;
    dcfg.angle_step_deg = 10.0;
    const ArrayGeometry geom = circular_array(4, 0.1, 0.0);
    const BeamformerBank bank = design_bank(geom, four_sector_layout(), dcfg, kCtx);

    SceneSpec spec;
    spec.geometry = geom;
    spec.ctx = kCtx;
    spec.sources.push_back({Direction(90, 35), sine(500, 0.2), 1.0});
    CHECK_THROWS_AS(sector_sir_gain(spec, bank, 0, cfg), ConfigError);

    spec.sources.push_back({Direction(270, 35), sine(700, 0.2), 1.0});
    CHECK_THROWS_AS(sector_sir_gain(spec, bank, 5, cfg), ConfigError);

    SceneSpec outside = spec;
    outside.sources[0].direction = Direction(90, 80);  // above every sector
    CHECK_THROWS_AS(sector_sir_gain(outside, bank, 0, cfg), ProcessingError);
  }
}

TEST_CASE("speech_shaped_noise is deterministic, unit RMS, low-frequency weighted") {
  const auto a = speech_shaped_noise(16000, 16000.0, 42);
  const auto b = speech_shaped_noise(16000, 16000.0, 42);
  CHECK(a == b);
  const auto c = speech_shaped_noise(16000, 16000.0, 43);
  CHECK(a != c);

  double energy = 0.0;
  for (double v : a) energy += v * v;
  CHECK(std::sqrt(energy / a.size()) == doctest::Approx(1.0).epsilon(1e-9));

  // spectral tilt: low band carries much more power than the high band
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, a);
  auto band_power = [&](double lo, double hi) {
    double p = 0.0;
    for (std::size_t b = 0; b < a.size() / 2; ++b) {
      const double f = static_cast<double>(b) * 16000.0 / static_cast<double>(a.size());
      if (f >= lo && f <= hi) p += std::norm(spectrum[b]);
    }
    return p;
  };
  CHECK(band_power(200.0, 1000.0) > 4.0 * band_power(3000.0, 6000.0));
}
