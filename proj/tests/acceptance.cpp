// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Each check prints one PASS/FAIL line; the exit code is
// the number of failures.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "sectorbeam/designer.hpp"
#include "sectorbeam/metrics.hpp"
#include "sectorbeam/pipeline.hpp"
#include "sectorbeam/scene_sim.hpp"
#include "sectorbeam/stft.hpp"
#include "test_oracles.hpp"

using namespace sectorbeam;

namespace {

const WaveContext kCtx(16000.0, 343.0);
int failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] %s: %s (%.2f s)\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// --- criterion 1: closed form vs dense least-squares oracle -----------------

void check_oracle_equivalence() {
  Timer timer;
  const ArrayGeometry geom = circular_array(8, 0.1, 0.0);
  const QuadratureGrid grid = build_grid(10.0, WeightingMode::elevation_cosine);
  const SectorTarget target{four_sector_layout()[1]};
  const double freq = 2000.0;

  const Eigen::MatrixXcd gram = gram_matrix(geom, grid, freq, kCtx);
  const Eigen::VectorXcd moment = target_moment(geom, grid, target, freq, kCtx);
  const Eigen::VectorXcd closed = solve_sector_weights(gram, moment, 0.0);
  const Eigen::VectorXcd brute =
      testing::brute_force_weights(geom, grid, target, freq, kCtx);

  const double max_diff = (closed - brute).cwiseAbs().maxCoeff();
  const double elapsed = timer.seconds();
  const bool pass = max_diff <= 1e-6 && elapsed < 1.0;
  report("oracle-equivalence", pass,
         fmt("max |dw| = %.3g (<= 1e-6), runtime %.3f s (< 1 s)", max_diff, elapsed),
         elapsed);
}

// --- criterion 2: in-sector dominance across the band ------------------------

struct PatternBanks {
  BeamformerBank eight;
  BeamformerBank four;
};

std::vector<double> sector2_margins_db(const BeamformerBank& bank) {
  const PatternMap map = export_pattern(bank, 1, {10.0, 25.0, 40.0, 55.0}, 1.0);
  const AngularSector& sector = bank.sectors[1];
  std::vector<double> margins(map.freq_axis_hz.size(), 0.0);
  for (std::size_t b = 0; b < map.freq_axis_hz.size(); ++b) {
    double in_sum = 0.0, out_sum = 0.0;
    long in_n = 0, out_n = 0;
    for (std::size_t e = 0; e < map.elevations_deg.size(); ++e) {
      for (int a = 0; a < map.azimuth_points(); ++a) {
        const Direction dir(a * map.azimuth_step_deg, map.elevations_deg[e]);
        const double db = map.magnitudes_db[e](a, static_cast<Eigen::Index>(b));
        if (sector.contains(dir)) {
          in_sum += db;
          ++in_n;
        } else {
          out_sum += db;
          ++out_n;
        }
      }
    }
    margins[b] = in_sum / in_n - out_sum / out_n;
  }
  return margins;
}

PatternBanks check_pattern_dominance() {
  Timer timer;
  DesignConfig cfg;  // n_fft 512, 1-degree grid, loading 1e-6
  const double radius = 0.06;
  PatternBanks banks{
      design_bank(circular_array(8, radius, 0.0), four_sector_layout(), cfg, kCtx),
      design_bank(circular_array(4, radius, 0.0), four_sector_layout(), cfg, kCtx)};

  const std::vector<double> margins8 = sector2_margins_db(banks.eight);
  const std::vector<double> margins4 = sector2_margins_db(banks.four);

  // 500..4000 Hz at fs 16000, n_fft 512 -> bins 16..128; 3 kHz -> bin 96
  double min_margin = 1e9;
  int min_bin = -1;
  for (int b = 16; b <= 128; ++b) {
    if (margins8[static_cast<std::size_t>(b)] < min_margin) {
      min_margin = margins8[static_cast<std::size_t>(b)];
      min_bin = b;
    }
  }
  const double margin8_3k = margins8[96];
  const double margin4_3k = margins4[96];

  const double elapsed = timer.seconds();
  const bool pass = min_margin >= 3.0 && margin4_3k < margin8_3k && elapsed < 120.0;
  report("beam-pattern-dominance", pass,
         fmt("8-mic margin over [500,4000] Hz >= %.2f dB at bin %d (>= 3 dB); "
             "3 kHz margins: 4-mic %.2f dB < 8-mic %.2f dB; runtime %.1f s (< 120 s)",
             min_margin, min_bin, margin4_3k, margin8_3k, elapsed),
         elapsed);
  return banks;
}

// --- criterion 3: simulated-scene enhancement --------------------------------

void check_scene_enhancement() {
  Timer design_timer;
  DesignConfig cfg;  // defaults: n_fft 512, 1-degree grid, loading 1e-6
  const ArrayGeometry geom = circular_array(8, 0.1, 0.0);
  const BeamformerBank bank = design_bank(geom, four_sector_layout(), cfg, kCtx);
  const double design_seconds = design_timer.seconds();

  Timer timer;
  StftConfig stft;
  SceneSpec spec;
  spec.geometry = geom;
  spec.ctx = kCtx;
  spec.noise_level = 0.0;
  spec.sources.push_back(
      {Direction(90.0, 35.0), speech_shaped_noise(160000, 16000.0, 101), 1.0});
  spec.sources.push_back(
      {Direction(270.0, 35.0), speech_shaped_noise(160000, 16000.0, 202), 1.0});

  const double gain = sector_sir_gain(spec, bank, 0, stft);
  const double elapsed = timer.seconds();
  const bool pass = gain >= 6.0 && elapsed < 30.0;
  report("scene-sir-gain", pass,
         fmt("sector-2 SIR gain %.2f dB (>= 6 dB) on 10 s audio in %.1f s (< 30 s; "
             "bank design %.1f s)",
             gain, elapsed, design_seconds),
         design_seconds + elapsed);
}

// --- criterion 4: cyclic channel symmetry ------------------------------------

void check_symmetry(const PatternBanks& banks) {
  Timer timer;
  double worst = 0.0;
  for (const BeamformerBank* bank : {&banks.four, &banks.eight}) {
    const int channels = bank->channels();
    const int shift = channels / 4;
    for (int b = 0; b < bank->bins(); ++b) {
      for (int s = 0; s < 3; ++s) {
        const Eigen::VectorXcd& next = bank->weights[static_cast<std::size_t>(b)].col(s + 1);
        const Eigen::VectorXcd& cur = bank->weights[static_cast<std::size_t>(b)].col(s);
        for (int j = 0; j < channels; ++j) {
          const double diff =
              std::abs(next[j] - cur[((j - shift) % channels + channels) % channels]);
          worst = std::max(worst, diff);
        }
      }
    }
  }
  const double elapsed = timer.seconds();
  const bool pass = worst < 1e-8;
  report("sector-symmetry", pass,
         fmt("max |w_{s+1} - shift(w_s)| = %.3g over 4- and 8-mic banks, all bins "
             "(< 1e-8)",
             worst),
         elapsed);
}

// --- criterion 5: STFT and pipeline round trips -------------------------------

void check_round_trips() {
  Timer timer;
  StftConfig cfg;
  std::mt19937 rng(55);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  double worst_stft = 0.0;
  for (Eigen::Index length : {static_cast<Eigen::Index>(512),
                              static_cast<Eigen::Index>(5120),
                              static_cast<Eigen::Index>(5157)}) {
    MultichannelAudio x;
    x.sample_rate_hz = 16000.0;
    x.samples.resize(2, length);
    for (Eigen::Index i = 0; i < x.samples.size(); ++i) x.samples.data()[i] = dist(rng);
    const MultichannelAudio y = stft_inverse(stft_forward(x, cfg));
    worst_stft = std::max(worst_stft, (y.samples - x.samples).norm() / x.samples.norm());
  }

  BeamformerBank identity;
  identity.geometry = circular_array(4, 0.1, 0.0);
  identity.sectors = four_sector_layout();
  identity.config.n_fft = cfg.n_fft;
  identity.config.sample_rate_hz = 16000.0;
  identity.ctx = kCtx;
  identity.weights.assign(static_cast<std::size_t>(cfg.bins()),
                          Eigen::MatrixXcd::Identity(4, 4));

  MultichannelAudio x;
  x.sample_rate_hz = 16000.0;
  x.samples.resize(4, 16000);
  for (Eigen::Index i = 0; i < x.samples.size(); ++i) x.samples.data()[i] = dist(rng);
  const MultichannelAudio y = apply_bank(x, identity, cfg);
  const double pipeline_err = (y.samples - x.samples).norm() / x.samples.norm();

  const double elapsed = timer.seconds();
  const bool pass = worst_stft <= 1e-6 && pipeline_err <= 1e-6;
  report("round-trips", pass,
         fmt("stft relative L2 <= %.3g, identity-bank pipeline %.3g (both <= 1e-6)",
             worst_stft, pipeline_err),
         elapsed);
}

// --- criterion 6: confusion scores --------------------------------------------

void check_confusion_scores() {
  Timer timer;
  bool pass = true;
  std::string detail;

  // hand-built table: rows with known exact fractions
  std::vector<std::pair<int, int>> pairs;
  for (int n = 0; n < 3; ++n) pairs.emplace_back(1, 1);
  for (int n = 0; n < 1; ++n) pairs.emplace_back(1, 2);
  for (int n = 0; n < 5; ++n) pairs.emplace_back(2, 2);
  for (int n = 0; n < 5; ++n) pairs.emplace_back(2, 1);
  const CountConfusion hand = CountConfusion::from_pairs(pairs);
  pass &= confusion_score(hand, 1, 1) == 3.0 / 4.0;
  pass &= confusion_score(hand, 2, 1) == 1.0 / 4.0;
  pass &= confusion_score(hand, 1, 2) == 5.0 / 10.0;
  pass &= confusion_score(hand, 2, 2) == 5.0 / 10.0;

  for (int k = 1; k <= 2; ++k) {
    double sum = 0.0;
    for (int i = 0; i <= hand.max_est(); ++i) sum += confusion_score(hand, i, k);
    pass &= std::abs(sum - 1.0) <= 1e-12;
  }

  // synthetic 10000-item row reproducing the published 96.84% fraction
  std::vector<std::pair<int, int>> row1;
  for (int n = 0; n < 9684; ++n) row1.emplace_back(1, 1);
  for (int n = 0; n < 301; ++n) row1.emplace_back(1, 2);
  for (int n = 0; n < 14; ++n) row1.emplace_back(1, 3);
  row1.emplace_back(1, 4);
  const CountConfusion table = CountConfusion::from_pairs(row1);
  const double score = confusion_score(table, 1, 1);
  pass &= score == 0.9684;

  const double elapsed = timer.seconds();
  report("confusion-scores", pass,
         fmt("hand-built fractions exact, rows sum to 1 within 1e-12, "
             "score(1,1) = %.4f (= 0.9684)",
             score),
         elapsed);
}

}  // namespace

int main() {
  check_oracle_equivalence();
  const PatternBanks banks = check_pattern_dominance();
  check_scene_enhancement();
  check_symmetry(banks);
  check_round_trips();
  check_confusion_scores();

  std::printf("%d of 6 criteria passed\n", 6 - failures);
  return failures;
}
