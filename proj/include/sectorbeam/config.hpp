// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sectorbeam/designer.hpp"
#include "sectorbeam/geometry.hpp"
#include "sectorbeam/scene_sim.hpp"
#include "sectorbeam/stft.hpp"

namespace sectorbeam {

/// Everything a design run needs, loaded from a JSON config file. Unknown
/// keys are rejected; invalid values are reported with their key path.
struct ToolConfig {
  ArrayGeometry geometry;
  std::vector<AngularSector> sectors;
  DesignConfig design;
  WaveContext ctx;
  StftConfig stft;
};

ToolConfig load_tool_config(const std::string& path);

/// Simulation scene plus the STFT settings to render it with.
struct SceneConfig {
  SceneSpec spec;
  StftConfig stft;
};

SceneConfig load_scene_config(const std::string& path);

}  // namespace sectorbeam
