#pragma once

#include <string>
#include <vector>

#include "luminav/types.hpp"

namespace luminav {

/// Geometry of one branch-entry attempt: a catheter with bent-tip length
/// tip_length and bend angle bend_angle launching into a branch of radius
/// branch_radius that takes off at takeoff_angle from the parent vessel.
struct FailureQuery {
  double branch_radius = 1.0;   // R, mm
  double tip_length = 5.0;      // L, mm
  double takeoff_angle = 0.0;   // alpha, rad, in [0, pi]
  double bend_angle = 0.0;      // theta, rad

  void validate() const;  // throws ConfigError
};

struct ToolSpec {
  std::string name;
  double bend_angle = 0.0;  // theta, rad, in (0, pi)
  double tip_length = 0.0;  // L, mm
};

struct ToolInventory {
  std::vector<ToolSpec> tools;

  void validate() const;  // throws ConfigError: non-empty, angles in (0, pi)
};

struct ToolSelection {
  ToolSpec tool;
  double predicted_deviation = 0.0;  // mm
  bool feasible = false;
};

/// How far the tip endpoint sits from the branch centerline when the bend
/// angle misses the takeoff angle: tip_length * sin|alpha - theta|. Used
/// literally even past 90 degrees of mismatch (where sin turns back down);
/// such queries are outside the cylindrical model's comfort zone and are
/// logged once.
double lateral_deviation(const FailureQuery& q);

/// The launch misses the branch when the deviation exceeds the branch
/// radius: branch_radius < lateral_deviation.
bool launch_fails(const FailureQuery& q);

/// Picks the inventory tool minimizing the angular mismatch |alpha -
/// theta| (ties: smaller tip_length, then name order) and reports its
/// predicted deviation and feasibility for the given branch radius.
ToolSelection select_tool(const ToolInventory& inventory, double takeoff_angle,
                          double branch_radius);

}  // namespace luminav
