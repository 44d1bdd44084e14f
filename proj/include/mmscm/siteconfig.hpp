// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmscm/coverage.hpp"
#include "mmscm/geometry.hpp"
#include "mmscm/ingest.hpp"

namespace mmscm {

struct SidewalkSite {
  std::string sidewalk_id;
  double bearing_deg = 0.0;  // clockwise from north, [0, 360)
  std::optional<FacadeLine> facade;
  std::optional<CornerPoint> corner;
  std::string measurement_file;  // optional, relative to the config file
};

// Versioned `site/1` JSON document tying measurements to geometry and the
// link-budget defaults used for coverage runs.
struct SiteConfig {
  std::string site_id;
  Position3D rx_position;
  std::vector<SidewalkSite> sidewalks;
  LinkBudget budget;  // defaults overridden by the optional "budget" object
};

SiteConfig parse_site_text(const std::string& text,
                           const std::string& origin = "<text>");
// Additionally requires referenced measurement files to exist relative to
// the config file's directory.
SiteConfig parse_site_file(const std::string& path);
std::string serialize_site(const SiteConfig& cfg);

const SidewalkSite* find_sidewalk(const SiteConfig& cfg,
                                  const std::string& sidewalk_id);

}  // namespace mmscm
