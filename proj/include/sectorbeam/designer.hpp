// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sectorbeam/errors.hpp"
#include "sectorbeam/geometry.hpp"

namespace sectorbeam {

/// Density applied to the spherical integration measure. elevation_cosine is
/// the solid-angle weight cos(elevation); verbatim_azimuth_cosine uses
/// cos(azimuth), which is signed and makes the Gram indefinite. It is kept
/// selectable for literal reproduction of the written objective.
enum class WeightingMode { elevation_cosine, verbatim_azimuth_cosine };

std::string to_string(WeightingMode mode);
WeightingMode weighting_mode_from_string(const std::string& name);

struct QuadratureNode {
  Direction dir;
  double weight = 0.0;
};

/// Midpoint-rule grid over the full sphere: nodes at cell centers, node
/// weight = density * step^2 in radians^2.
struct QuadratureGrid {
  std::vector<QuadratureNode> nodes;
  double azimuth_step_deg = 1.0;
  double elevation_step_deg = 1.0;
  WeightingMode mode = WeightingMode::elevation_cosine;

  double total_weight() const;
};

/// Indicator target: 1 inside the sector, 0 outside.
struct SectorTarget {
  AngularSector sector;

  double evaluate(const Direction& dir) const {
    return sector.contains(dir) ? 1.0 : 0.0;
  }
};

struct DesignConfig {
  int n_fft = 512;
  double sample_rate_hz = 16000.0;
  double diagonal_loading = 1e-6;  // relative to trace(G)/I
  double angle_step_deg = 1.0;
  WeightingMode weighting_mode = WeightingMode::elevation_cosine;

  int bins() const { return n_fft / 2 + 1; }
  double bin_freq_hz(int bin) const { return bin * sample_rate_hz / n_fft; }
  void validate() const;
};

/// Per-frequency beamforming weights for a list of sectors. weights[b] is an
/// I x S complex matrix for STFT bin b in [0, n_fft/2].
struct BeamformerBank {
  std::vector<Eigen::MatrixXcd> weights;
  ArrayGeometry geometry;
  std::vector<AngularSector> sectors;
  DesignConfig config;
  WaveContext ctx;

  int bins() const { return static_cast<int>(weights.size()); }
  int channels() const { return geometry.channels(); }
  int sector_count() const { return static_cast<int>(sectors.size()); }
  double bin_freq_hz(int bin) const { return config.bin_freq_hz(bin); }
};

/// Condition estimates of the loaded Gram, one entry per bin.
struct DesignDiagnostics {
  std::vector<double> condition;
};

QuadratureGrid build_grid(double step_deg, WeightingMode mode);

/// Frequency-independent per-node steering phases for one geometry and grid;
/// evaluates the steering matrix and the design integrals at any frequency.
class SteeringBasis {
 public:
  SteeringBasis(const ArrayGeometry& geom, const QuadratureGrid& grid);

  /// N x I matrix whose row n is the steering vector at grid node n.
  Eigen::MatrixXcd steering_matrix(double freq_hz, double speed_of_sound) const;

  /// G = sum_n w_n d_n d_n^H from a steering matrix returned above.
  Eigen::MatrixXcd gram(const Eigen::MatrixXcd& steering) const;

  /// g = sum_{n in sector} w_n d_n.
  Eigen::VectorXcd sector_moment(const Eigen::MatrixXcd& steering,
                                 const std::vector<bool>& mask) const;

  std::vector<bool> sector_mask(const AngularSector& sector) const;
  Eigen::Index node_count() const { return weights_.size(); }

 private:
  Eigen::MatrixXd projection_;  // N x I, k_n . m_i
  Eigen::VectorXd weights_;     // N
  std::vector<Direction> dirs_;
  // nodes are stored azimuth-major; per-column partials are combined with
  // compensated summation so the result barely depends on column order
  Eigen::Index azimuth_columns_ = 1;
  Eigen::Index column_height_ = 0;
};

Eigen::MatrixXcd gram_matrix(const ArrayGeometry& geom, const QuadratureGrid& grid,
                             double freq_hz, const WaveContext& ctx);

Eigen::VectorXcd target_moment(const ArrayGeometry& geom, const QuadratureGrid& grid,
                               const SectorTarget& target, double freq_hz,
                               const WaveContext& ctx);

/// Solves (G + loading*(trace(G)/I)*Id) w = g with a pivoted Hermitian
/// factorization. Fails if the loaded matrix is numerically singular
/// (condition estimate above 1e14).
Eigen::VectorXcd solve_sector_weights(const Eigen::MatrixXcd& gram,
                                      const Eigen::VectorXcd& moment,
                                      double loading);

/// Designs the whole bank: one Gram per bin, one moment and solve per
/// sector. Bins are computed independently (parallel across `threads`
/// workers, 0 = hardware concurrency) and results do not depend on the
/// thread count.
BeamformerBank design_bank(const ArrayGeometry& geom,
                           const std::vector<AngularSector>& sectors,
                           const DesignConfig& cfg, const WaveContext& ctx,
                           DesignDiagnostics* diagnostics = nullptr,
                           unsigned threads = 0);

/// w_s^H d(dir, f_bin).
std::complex<double> beam_response(const BeamformerBank& bank, int sector_index,
                                   const Direction& dir, int bin_index);

}  // namespace sectorbeam
