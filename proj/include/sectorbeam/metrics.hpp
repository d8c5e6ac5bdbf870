// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sectorbeam/errors.hpp"

namespace sectorbeam {

/// Speaker-count confusion counts: counts[k][i] is the number of test items
/// with true count k estimated as i.
struct CountConfusion {
  std::vector<std::vector<long>> counts;  // [true_k][est_i]

  static CountConfusion from_pairs(const std::vector<std::pair<int, int>>& pairs);

  int max_true() const { return static_cast<int>(counts.size()) - 1; }
  int max_est() const {
    return counts.empty() ? -1 : static_cast<int>(counts.front().size()) - 1;
  }
  long row_total(int true_k) const;
};

/// N_k^i / N_k. Errors when no test item has true count k.
double confusion_score(const CountConfusion& conf, int est_i, int true_k);

/// 10*log10 of the band-limited power ratio, band selected by STFT bin
/// masking. Exactly antisymmetric in its arguments; capped at +/-120 dB when
/// one side has zero power in the band.
double power_ratio_db(const std::vector<double>& target, const std::vector<double>& other,
                      std::pair<double, double> band_hz, double sample_rate_hz);

/// One `true_count,estimated_count` pair per line; a header row with those
/// names is allowed. Malformed rows are reported with their line number.
std::vector<std::pair<int, int>> read_count_pairs_csv(const std::string& path);

/// Writes all defined scores as `true_k,est_i,score`, skipping rows with
/// zero total.
void write_confusion_csv(const CountConfusion& conf, const std::string& path);

}  // namespace sectorbeam
