// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#include "sectorbeam/geometry.hpp"

#include <cmath>
#include <complex>
#include <utility>

namespace sectorbeam {

namespace {

double wrap_azimuth(double deg) {
  double a = std::fmod(deg, 360.0);
  if (a < 0.0) a += 360.0;
  if (a == 360.0) a = 0.0;
  return a;
}

}  // namespace

// Quadrant-reduced cosine/sine so that a 90-degree azimuth shift maps
// (c, s) to (-s, c) bitwise. Rotational symmetries of circular arrays then
// hold exactly in floating point, which the sector-permutation property of
// the designer relies on.
static void exact_cos_sin_deg(double azimuth_deg, double* c, double* s) {
  const double a = wrap_azimuth(azimuth_deg);
  const int quadrant = std::min(3, static_cast<int>(a / 90.0));
  const double r = deg2rad(a - 90.0 * quadrant);
  const double cr = std::cos(r);
  const double sr = std::sin(r);
  switch (quadrant) {
    case 0: *c = cr; *s = sr; break;
    case 1: *c = -sr; *s = cr; break;
    case 2: *c = -cr; *s = -sr; break;
    default: *c = sr; *s = -cr; break;
  }
}

Direction::Direction(double azimuth, double elevation) {
  if (!std::isfinite(azimuth) || !std::isfinite(elevation)) {
    throw ConfigError("Direction: angles must be finite");
  }
  if (elevation < -90.0 || elevation > 90.0) {
    throw ConfigError("Direction: elevation_deg " + std::to_string(elevation) +
                      " outside [-90, 90]");
  }
  azimuth_deg = wrap_azimuth(azimuth);
  elevation_deg = elevation;
}

ArrayGeometry::ArrayGeometry(std::vector<Eigen::Vector3d> mic_positions,
                             std::string array_name)
    : mics(std::move(mic_positions)), name(std::move(array_name)) {
  if (mics.empty()) {
    throw ConfigError("ArrayGeometry: at least one microphone required");
  }
  for (const auto& m : mics) {
    if (!m.allFinite()) {
      throw ConfigError("ArrayGeometry: microphone coordinates must be finite");
    }
  }
}

AngularSector::AngularSector(double az_start, double az_end, double el_min,
                             double el_max, std::string sector_label)
    : azimuth_start_deg(wrap_azimuth(az_start)),
      azimuth_end_deg(wrap_azimuth(az_end)),
      elevation_min_deg(el_min),
      elevation_max_deg(el_max),
      label(std::move(sector_label)) {
  if (!(el_min < el_max)) {
    throw ConfigError("AngularSector: elevation_min_deg must be < elevation_max_deg");
  }
  if (el_min < -90.0 || el_max > 90.0) {
    throw ConfigError("AngularSector: elevation range must lie within [-90, 90]");
  }
}

bool AngularSector::contains(const Direction& dir) const {
  if (dir.elevation_deg < elevation_min_deg || dir.elevation_deg > elevation_max_deg) {
    return false;
  }
  const double a = dir.azimuth_deg;
  const double s = azimuth_start_deg;
  const double e = azimuth_end_deg;
  if (s == e) return true;  // full circle
  if (s < e) return a >= s && a < e;
  return a >= s || a < e;  // wraps through 0
}

WaveContext::WaveContext(double fs, double c)
    : sample_rate_hz(fs), speed_of_sound_mps(c) {
  if (!(fs > 0.0) || !(c > 0.0)) {
    throw ConfigError("WaveContext: sample rate and speed of sound must be positive");
  }
}

Eigen::Vector3d unit_vector(const Direction& dir) {
  double caz, saz;
  exact_cos_sin_deg(dir.azimuth_deg, &caz, &saz);
  const double el = deg2rad(dir.elevation_deg);
  return {caz * std::cos(el), saz * std::cos(el), std::sin(el)};
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, const Direction& dir,
                                 double freq_hz, const WaveContext& ctx) {
  const Eigen::Vector3d k = unit_vector(dir);
  Eigen::VectorXcd d(geom.channels());
  const double scale = -2.0 * kPi * freq_hz / ctx.speed_of_sound_mps;
  for (int i = 0; i < geom.channels(); ++i) {
    const double phase = scale * k.dot(geom.mics[static_cast<std::size_t>(i)]);
    d[i] = std::polar(1.0, phase);
  }
  return d;
}

ArrayGeometry circular_array(int num_mics, double radius_m,
                             double first_mic_azimuth_deg) {
  if (num_mics < 1) {
    throw ConfigError("circular_array: num_mics must be >= 1");
  }
  if (!(radius_m > 0.0)) {
    throw ConfigError("circular_array: radius_m must be positive");
  }
  std::vector<Eigen::Vector3d> mics;
  mics.reserve(static_cast<std::size_t>(num_mics));
  for (int j = 0; j < num_mics; ++j) {
    double c, s;
    exact_cos_sin_deg(first_mic_azimuth_deg + j * 360.0 / num_mics, &c, &s);
    mics.emplace_back(radius_m * c, radius_m * s, 0.0);
  }
  return ArrayGeometry(std::move(mics), "circular");
}

std::vector<AngularSector> four_sector_layout() {
  return {
      AngularSector(315.0, 45.0, 10.0, 60.0, "sector_1"),
      AngularSector(45.0, 135.0, 10.0, 60.0, "sector_2"),
      AngularSector(135.0, 225.0, 10.0, 60.0, "sector_3"),
      AngularSector(225.0, 315.0, 10.0, 60.0, "sector_4"),
  };
}

}  // namespace sectorbeam
