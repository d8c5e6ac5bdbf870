// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sectorbeam/errors.hpp"

namespace sectorbeam {

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// A direction on the unit sphere. Azimuth is wrapped into [0, 360) on
/// construction; elevations outside [-90, 90] are rejected.
struct Direction {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;

  Direction() = default;
  Direction(double azimuth, double elevation);
};

/// Microphone positions in meters, origin at the array center.
struct ArrayGeometry {
  std::vector<Eigen::Vector3d> mics;
  std::string name;

  ArrayGeometry() = default;
  explicit ArrayGeometry(std::vector<Eigen::Vector3d> mic_positions,
                         std::string array_name = "");

  int channels() const { return static_cast<int>(mics.size()); }
};

/// An azimuth/elevation box on the sphere. The azimuth interval is half-open
/// [start, end) and may wrap through 0 (e.g. 315 -> 45); equal normalized
/// endpoints denote the full circle. Elevation bounds are closed.
struct AngularSector {
  double azimuth_start_deg = 0.0;
  double azimuth_end_deg = 0.0;
  double elevation_min_deg = -90.0;
  double elevation_max_deg = 90.0;
  std::string label;

  AngularSector() = default;
  AngularSector(double az_start, double az_end, double el_min, double el_max,
                std::string sector_label = "");

  bool contains(const Direction& dir) const;
};

/// Sampling rate and propagation speed shared by design and simulation.
struct WaveContext {
  double sample_rate_hz = 16000.0;
  double speed_of_sound_mps = 343.0;

  WaveContext() = default;
  WaveContext(double fs, double c);
};

/// Unit propagation vector [cos(az)cos(el), sin(az)cos(el), sin(el)].
Eigen::Vector3d unit_vector(const Direction& dir);

/// Far-field steering vector: entry i = exp(-2j*pi*f*(k.m_i)/c). At f = 0 the
/// vector is exactly all-ones; negative frequencies give the conjugate.
Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, const Direction& dir,
                                 double freq_hz, const WaveContext& ctx);

/// Evenly spaced microphones on a circle of the given radius in the z=0
/// plane, mic j at azimuth first_mic_azimuth_deg + j*360/num_mics.
ArrayGeometry circular_array(int num_mics, double radius_m,
                             double first_mic_azimuth_deg = 0.0);

/// The default meeting layout: four 90-degree azimuth sectors starting at
/// 315 degrees, all with elevation range [10, 60]. Config preset "paper4".
std::vector<AngularSector> four_sector_layout();

}  // namespace sectorbeam
