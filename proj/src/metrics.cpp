// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#include "sectorbeam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "sectorbeam/stft.hpp"

namespace sectorbeam {

CountConfusion CountConfusion::from_pairs(const std::vector<std::pair<int, int>>& pairs) {
  int max_true = 0, max_est = 0;
  for (const auto& [true_k, est_i] : pairs) {
    if (true_k < 0 || est_i < 0) {
      throw ConfigError("CountConfusion: counts must be non-negative");
    }
    max_true = std::max(max_true, true_k);
    max_est = std::max(max_est, est_i);
  }
  CountConfusion conf;
  conf.counts.assign(static_cast<std::size_t>(max_true) + 1,
                     std::vector<long>(static_cast<std::size_t>(max_est) + 1, 0));
  for (const auto& [true_k, est_i] : pairs) {
    ++conf.counts[static_cast<std::size_t>(true_k)][static_cast<std::size_t>(est_i)];
  }
  return conf;
}

long CountConfusion::row_total(int true_k) const {
  if (true_k < 0 || true_k > max_true()) return 0;
  long total = 0;
  for (long n : counts[static_cast<std::size_t>(true_k)]) total += n;
  return total;
}

double confusion_score(const CountConfusion& conf, int est_i, int true_k) {
  const long total = conf.row_total(true_k);
  if (total <= 0) {
    throw ConfigError("confusion_score: no test items with true count " +
                      std::to_string(true_k));
  }
  long n = 0;
  if (true_k >= 0 && true_k <= conf.max_true() && est_i >= 0 && est_i <= conf.max_est()) {
    n = conf.counts[static_cast<std::size_t>(true_k)][static_cast<std::size_t>(est_i)];
  }
  return static_cast<double>(n) / static_cast<double>(total);
}

double power_ratio_db(const std::vector<double>& target, const std::vector<double>& other,
                      std::pair<double, double> band_hz, double sample_rate_hz) {
  if (target.size() != other.size()) {
    throw ConfigError("power_ratio_db: signals must have equal length");
  }
  if (target.empty()) {
    throw ConfigError("power_ratio_db: signals are empty");
  }
  if (!(band_hz.first >= 0.0) || !(band_hz.second >= band_hz.first) ||
      band_hz.second > sample_rate_hz / 2.0) {
    throw ConfigError("power_ratio_db: band must satisfy 0 <= low <= high <= Nyquist");
  }

  StftConfig cfg;
  cfg.sample_rate_hz = sample_rate_hz;

  auto band_power = [&](const std::vector<double>& x) {
    MultichannelAudio audio;
    audio.sample_rate_hz = sample_rate_hz;
    audio.samples.resize(1, static_cast<Eigen::Index>(x.size()));
    for (std::size_t n = 0; n < x.size(); ++n) {
      audio.samples(0, static_cast<Eigen::Index>(n)) = x[n];
    }
    const SpectrogramTensor spec = stft_forward(audio, cfg);
    double power = 0.0;
    for (int b = 0; b < cfg.bins(); ++b) {
      const double f = cfg.bin_freq_hz(b);
      if (f < band_hz.first || f > band_hz.second) continue;
      const double symmetry = (b == 0 || b == cfg.n_fft / 2) ? 1.0 : 2.0;
      power += symmetry * spec.channels[0].row(b).squaredNorm();
    }
    return power;
  };

  const double p_target = band_power(target);
  const double p_other = band_power(other);
  if (p_target <= 0.0 && p_other <= 0.0) return 0.0;
  if (p_other <= 0.0) return 120.0;
  if (p_target <= 0.0) return -120.0;
  // difference of logs keeps the exact antisymmetry of the ratio
  const double db = 10.0 * (std::log10(p_target) - std::log10(p_other));
  return std::clamp(db, -120.0, 120.0);
}

std::vector<std::pair<int, int>> read_count_pairs_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("read_count_pairs_csv: cannot open '" + path + "'");

  std::vector<std::pair<int, int>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == "true_count,estimated_count") continue;
    int true_k = 0, est_i = 0;
    char extra;
    if (std::sscanf(line.c_str(), "%d,%d%c", &true_k, &est_i, &extra) != 2 ||
        true_k < 0 || est_i < 0) {
      throw ConfigError("read_count_pairs_csv: malformed row at line " +
                        std::to_string(line_no) + " of '" + path + "'");
    }
    pairs.emplace_back(true_k, est_i);
  }
  if (pairs.empty()) {
    throw ConfigError("read_count_pairs_csv: no count pairs in '" + path + "'");
  }
  return pairs;
}

void write_confusion_csv(const CountConfusion& conf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_confusion_csv: cannot open '" + path + "'");
  out << "true_k,est_i,score\n";
  for (int k = 0; k <= conf.max_true(); ++k) {
    if (conf.row_total(k) == 0) continue;
    for (int i = 0; i <= conf.max_est(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.12g", confusion_score(conf, i, k));
      out << k << ',' << i << ',' << buf << '\n';
    }
  }
  if (!out) throw ConfigError("write_confusion_csv: write to '" + path + "' failed");
}

}  // namespace sectorbeam
