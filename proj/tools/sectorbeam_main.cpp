// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
//
// sectorbeam: design fixed angular-sector beamformers from array geometry,
// apply them to multichannel WAV files, export beam patterns, run simulated
// far-field scenes and score speaker-count estimates.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sectorbeam/bank_io.hpp"
#include "sectorbeam/config.hpp"
#include "sectorbeam/designer.hpp"
#include "sectorbeam/metrics.hpp"
#include "sectorbeam/pipeline.hpp"
#include "sectorbeam/scene_sim.hpp"
#include "sectorbeam/wav.hpp"

namespace {

using namespace sectorbeam;

void print_condition_summary(const DesignDiagnostics& diag, const DesignConfig& cfg) {
  if (diag.condition.empty()) return;
  std::vector<double> sorted = diag.condition;
  std::sort(sorted.begin(), sorted.end());
  const auto worst =
      std::max_element(diag.condition.begin(), diag.condition.end()) -
      diag.condition.begin();
  std::fprintf(stderr,
               "condition of loaded Gram across %zu bins: min %.3g, median %.3g, "
               "max %.3g (bin %ld, %.0f Hz)\n",
               sorted.size(), sorted.front(), sorted[sorted.size() / 2], sorted.back(),
               static_cast<long>(worst), cfg.bin_freq_hz(static_cast<int>(worst)));
}

int cmd_design(const std::string& config_path, const std::string& out_path,
               const std::string& csv_path, unsigned threads) {
  const ToolConfig cfg = load_tool_config(config_path);
  DesignDiagnostics diag;
  const BeamformerBank bank =
      design_bank(cfg.geometry, cfg.sectors, cfg.design, cfg.ctx, &diag, threads);
  print_condition_summary(diag, cfg.design);
  save_bank(bank, out_path, cfg.stft.hop);
  if (!csv_path.empty()) export_bank_csv(bank, csv_path);
  std::fprintf(stderr, "wrote %s (%d bins, %d channels, %d sectors)\n",
               out_path.c_str(), bank.bins(), bank.channels(), bank.sector_count());
  return 0;
}

int cmd_apply(const std::string& bank_path, const std::string& in_path,
              const std::string& out_path) {
  const BankFile loaded = load_bank(bank_path);
  StftConfig stft;
  stft.n_fft = loaded.bank.config.n_fft;
  stft.hop = loaded.stft_hop > 0 ? loaded.stft_hop : stft.n_fft / 2;
  stft.sample_rate_hz = loaded.bank.config.sample_rate_hz;

  const MultichannelAudio input = read_wav(in_path);
  const MultichannelAudio output = apply_bank(input, loaded.bank, stft);
  write_wav(out_path, output, WavFormat::float32);
  write_apply_sidecar(out_path, bank_path, loaded.bank, stft);
  std::fprintf(stderr, "wrote %s (%d sector channels, %lld samples)\n",
               out_path.c_str(), output.channels(),
               static_cast<long long>(output.length()));
  return 0;
}

int cmd_pattern(const std::string& bank_path, int sector_number,
                const std::vector<double>& elevations, double azimuth_step,
                const std::string& out_path) {
  const BankFile loaded = load_bank(bank_path);
  if (sector_number < 1 || sector_number > loaded.bank.sector_count()) {
    throw ConfigError("--sector must be in [1, " +
                      std::to_string(loaded.bank.sector_count()) + "]");
  }
  const PatternMap map =
      export_pattern(loaded.bank, sector_number - 1, elevations, azimuth_step);
  write_pattern_csv(map, out_path);
  std::fprintf(stderr, "wrote %s (%zu elevations x %d azimuths x %zu bins)\n",
               out_path.c_str(), map.elevations_deg.size(), map.azimuth_points(),
               map.freq_axis_hz.size());
  return 0;
}

int cmd_simulate(const std::string& scene_path, const std::string& bank_path,
                 const std::string& report_path, long long seed_override) {
  SceneConfig scene = load_scene_config(scene_path);
  if (seed_override >= 0) scene.spec.seed = static_cast<std::uint64_t>(seed_override);
  const BankFile loaded = load_bank(bank_path);
  const BeamformerBank& bank = loaded.bank;
  if (scene.stft.n_fft != bank.config.n_fft) {
    scene.stft.n_fft = bank.config.n_fft;
    scene.stft.hop = loaded.stft_hop > 0 ? loaded.stft_hop : scene.stft.n_fft / 2;
  }

  // every source must fall inside some sector before any rendering starts
  std::vector<int> source_sector(scene.spec.sources.size(), -1);
  for (std::size_t i = 0; i < scene.spec.sources.size(); ++i) {
    for (int s = 0; s < bank.sector_count(); ++s) {
      if (bank.sectors[static_cast<std::size_t>(s)].contains(
              scene.spec.sources[i].direction)) {
        source_sector[i] = s;
        break;
      }
    }
    if (source_sector[i] < 0) {
      throw ProcessingError("simulate: source " + std::to_string(i) +
                            " is outside every sector");
    }
  }

  const MultichannelAudio mix = render_scene(scene.spec, scene.stft);
  const MultichannelAudio beams = apply_bank(mix, bank, scene.stft);

  const std::filesystem::path report(report_path);
  std::filesystem::path stem = report.parent_path() / report.stem();
  const std::string mix_path = stem.string() + "_mix.wav";
  const std::string beams_path = stem.string() + "_beams.wav";
  write_wav(mix_path, mix, WavFormat::float32);
  write_wav(beams_path, beams, WavFormat::float32);
  write_apply_sidecar(beams_path, bank_path, bank, scene.stft);

  std::ofstream out(report_path);
  if (!out) throw ConfigError("simulate: cannot open '" + report_path + "'");
  out << "sector,label,target_source,sir_gain_db\n";
  for (int s = 0; s < bank.sector_count(); ++s) {
    int target = -1;
    for (std::size_t i = 0; i < source_sector.size(); ++i) {
      if (source_sector[i] == s) {
        target = static_cast<int>(i);
        break;
      }
    }
    out << (s + 1) << ',' << bank.sectors[static_cast<std::size_t>(s)].label << ',';
    if (target >= 0) out << target;
    out << ',';
    if (target >= 0 && scene.spec.sources.size() >= 2) {
      const double gain = sector_sir_gain(scene.spec, bank, target, scene.stft);
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", gain);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw ConfigError("simulate: write to '" + report_path + "' failed");
  std::fprintf(stderr, "wrote %s, %s, %s\n", report_path.c_str(), mix_path.c_str(),
               beams_path.c_str());
  return 0;
}

int cmd_eval_counts(const std::string& pairs_path, const std::string& out_path) {
  const auto pairs = read_count_pairs_csv(pairs_path);
  const CountConfusion conf = CountConfusion::from_pairs(pairs);
  write_confusion_csv(conf, out_path);
  std::fprintf(stderr, "wrote %s (%zu pairs)\n", out_path.c_str(), pairs.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Angular-sector beamforming toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name

  unsigned threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (0 = auto); any value gives identical output")
      ->envname("SECTORBEAM_THREADS");

  std::string config_path, bank_path, in_path, out_path, csv_path, pairs_path;
  std::vector<double> elevations;
  int sector_number = 1;
  double azimuth_step = 1.0;
  long long seed_override = -1;

  auto* design = app.add_subcommand("design", "design a beamformer bank from a config");
  design->add_option("--config", config_path, "JSON design config")->required();
  design->add_option("--out", out_path, "output bank file")->required();
  design->add_option("--csv", csv_path, "also export weights as CSV");

  auto* apply = app.add_subcommand("apply", "apply a bank to a multichannel WAV");
  apply->add_option("--bank", bank_path, "bank file from `design`")->required();
  apply->add_option("--in", in_path, "input WAV (channels must match the bank)")
      ->required();
  apply->add_option("--out", out_path, "output WAV, one channel per sector")->required();

  auto* pattern = app.add_subcommand("pattern", "export beam response magnitudes as CSV");
  pattern->add_option("--bank", bank_path, "bank file from `design`")->required();
  pattern->add_option("--sector", sector_number, "sector number, 1-based")->required();
  pattern->add_option("--elevations", elevations, "elevation angles in degrees")
      ->required()
      ->delimiter(',');
  pattern->add_option("--azimuth-step", azimuth_step, "azimuth grid step in degrees");
  pattern->add_option("--out", out_path, "output CSV")->required();

  auto* simulate = app.add_subcommand("simulate", "render a far-field scene and report "
                                                  "per-sector SIR gains");
  simulate->add_option("--config", config_path, "JSON scene config")->required();
  simulate->add_option("--bank", bank_path, "bank file from `design`")->required();
  simulate->add_option("--out", out_path, "report CSV (WAVs written alongside)")
      ->required();
  simulate->add_option("--seed", seed_override, "override the scene noise seed");

  auto* eval = app.add_subcommand("eval-counts", "score speaker-count estimates");
  eval->add_option("--pairs", pairs_path, "CSV of true_count,estimated_count rows")
      ->required();
  eval->add_option("--out", out_path, "output CSV of confusion scores")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(design)) {
      return cmd_design(config_path, out_path, csv_path, threads);
    }
    if (app.got_subcommand(apply)) {
      return cmd_apply(bank_path, in_path, out_path);
    }
    if (app.got_subcommand(pattern)) {
      return cmd_pattern(bank_path, sector_number, elevations, azimuth_step, out_path);
    }
    if (app.got_subcommand(simulate)) {
      return cmd_simulate(config_path, bank_path, out_path, seed_override);
    }
    if (app.got_subcommand(eval)) {
      return cmd_eval_counts(pairs_path, out_path);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ProcessingError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
