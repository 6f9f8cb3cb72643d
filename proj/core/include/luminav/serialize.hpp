#pragma once

#include <string>
#include <vector>

#include "luminav/bench.hpp"
#include "luminav/failure.hpp"
#include "luminav/kinematics.hpp"
#include "luminav/planner.hpp"
#include "luminav/types.hpp"

namespace luminav {

/// Doubles are written with enough digits to round-trip bit-exactly, so
/// re-parsing an artifact reproduces the original values.
std::string format_double(double value);

std::string read_text_file(const std::string& path);   // throws IoError
void write_text_file(const std::string& path, const std::string& content);

// ---- plan artifacts ---------------------------------------------------

/// Deterministic JSON for a plan: config echo, status, counters, and the
/// root-first path. Timing is wall-clock noise, so it only appears when
/// include_timing is set — files meant to be byte-identical across runs
/// leave it out.
std::string plan_to_json(const PlanResult& result, const PlannerConfig& config,
                         bool include_timing = false);

struct PlanDocument {
  PlannerConfig config;
  PlanStatus status = PlanStatus::budget_exhausted;
  int iterations_used = 0;
  int tree_size = 0;
  std::vector<TreeNode> path;  // parent links not reconstructed
};

PlanDocument plan_from_json(const std::string& json_text);

std::string polyline_to_text(const std::vector<Vec3>& points);
std::vector<Vec3> path_positions(const std::vector<TreeNode>& path);

// ---- command artifacts --------------------------------------------------

/// CSV with the actuation schema (tool, insertion_mm, rotation_rad,
/// source_node). The maneuver geometry lives in the plan JSON; see
/// attach_command_geometry.
std::string commands_to_csv(const std::vector<MotionCommand>& commands);
std::vector<MotionCommand> commands_from_csv(const std::string& csv_text);

/// JSON carries the full command including kind and direction.
std::string commands_to_json(const std::vector<MotionCommand>& commands);
std::vector<MotionCommand> commands_from_json(const std::string& json_text);

/// Rebuilds kind and direction for CSV-loaded commands by joining
/// source_node against the plan path (glide: chord; rebound: stored steer;
/// launch: steer for the catheter half, tip-to-landing for the wire half).
/// Throws ConfigError when a command does not match its node.
void attach_command_geometry(std::vector<MotionCommand>& commands,
                             const std::vector<TreeNode>& path);

// ---- goal files ---------------------------------------------------------

/// Goal annotation: either a bare JSON array of face ids, an object with a
/// "faces" array, or a named-target map {"LCCA": [...], ...} selected via
/// `target`. A single-entry map needs no target name.
GoalRegion load_goal_file(const std::string& path,
                          const std::string& target = "");
std::vector<std::string> goal_file_targets(const std::string& path);

// ---- tool inventory -------------------------------------------------------

/// JSON array of {name, theta_deg, length_mm}.
ToolInventory inventory_from_json(const std::string& json_text);
ToolInventory load_inventory_file(const std::string& path);

// ---- bench artifacts ----------------------------------------------------

std::string trials_to_json(const std::vector<TrialReport>& reports,
                           bool include_timing = false);
std::string curve_to_csv(const SuccessCurve& curve);
std::string timing_to_csv(const std::vector<TimingRow>& rows);
std::string trial_timing_to_csv(const std::vector<TrialReport>& reports);

// ---- failure grid ---------------------------------------------------------

struct FailureGridRow {
  double takeoff_angle = 0.0;  // rad
  double bend_angle = 0.0;     // rad
  double tip_length = 0.0;     // mm
  double branch_radius = 0.0;  // mm
  double deviation = 0.0;      // mm
  bool fails = false;
};

std::string failure_grid_to_csv(const std::vector<FailureGridRow>& rows);

}  // namespace luminav
