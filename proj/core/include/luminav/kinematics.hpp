#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "luminav/mesh.hpp"
#include "luminav/planner.hpp"
#include "luminav/types.hpp"

namespace luminav {

enum class Tool { guidewire, catheter };

/// Which physical maneuver a command realizes. glide/rebound are pure
/// guidewire moves; a launch compiles to a catheter advance followed by a
/// guidewire advance from the catheter tip.
enum class CommandKind { glide, rebound, launch_catheter, launch_wire };

const char* tool_name(Tool t);
const char* command_kind_name(CommandKind k);
Tool parse_tool(const std::string& name);
CommandKind parse_command_kind(const std::string& name);

struct MotionCommand {
  Tool tool = Tool::guidewire;
  double insertion_mm = 0.0;   // >= 0
  double rotation_rad = 0.0;   // in (-pi, pi]
  int source_node = -1;        // index into the root-first path
  // The scalar pair above matches the actuation interface; replaying in 3D
  // additionally needs the maneuver type and the unit direction the
  // insertion was executed along, so compile_path records them here.
  CommandKind kind = CommandKind::glide;
  Vec3 direction = Vec3::Zero();
};

/// Tip frames of both tools, advanced edge by edge during compilation.
struct ToolState {
  Vec3 wire_tip_tangent = Vec3::UnitX();
  Vec3 catheter_tip_tangent = Vec3::UnitX();
  Vec3 wire_tip_position = Vec3::Zero();
  Vec3 catheter_tip_position = Vec3::Zero();
};

/// Guidewire command for a wall-following edge q_near -> q_new:
/// insertion = |q_new - q_near|; rotation = atan2(t_g . n_new,
/// |t_g x n_new|). The two-argument form keeps the parallel configuration
/// (cross norm 0) finite: dot +1 with zero cross gives +pi/2. Positive
/// rotation turns the tip toward the half-space n_new points into.
MotionCommand ik_wire_step(const SurfacePoint& q_near, const SurfacePoint& q_new,
                           const Vec3& n_new, const ToolState& state);

/// Commands for an angled-catheter edge: the catheter advances from
/// q_near to q_tip (insertion |q_tip - q_near|, rotation from t_c against
/// s = q_sample - q_tip), then the guidewire advances from q_tip toward
/// q_sample (insertion |s|, rotation as in ik_wire_step against the
/// landing normal). Returned as (catheter, guidewire) in execution order.
/// Throws KinematicsError if s is degenerate.
std::pair<MotionCommand, MotionCommand> ik_launch_step(
    const SurfacePoint& q_near, const Vec3& q_tip, const SurfacePoint& q_sample,
    const Vec3& n_landing, const ToolState& state);

/// Compiles a root-first node path into executable commands. Tool tip
/// tangents start along the first edge's actuation direction and are
/// updated after every edge to the executed direction of travel (chord
/// for wall moves, tip-to-landing for launches). Throws KinematicsError
/// (with the offending node id) on geometrically invalid edges.
std::vector<MotionCommand> compile_path(const std::vector<TreeNode>& path,
                                        const TriangleMesh& mesh);

struct ReplayViolation {
  int command_index = -1;
  std::string message;
};

struct ReplayResult {
  std::vector<Vec3> trajectory;       // tip polyline, starts at the entry point
  std::vector<SurfacePoint> contacts; // wall contacts in execution order
  std::optional<ReplayViolation> violation;

  bool ok() const { return !violation.has_value(); }
};

/// Forward-kinematic validation oracle: executes commands as idealized
/// motions (projection-tracked glide, straight flight with wall re-contact
/// by ray casting) and checks that every reached vertex stays inside the
/// anatomy or on its wall. A command that would pass through a wall, or a
/// flight that leaves an open boundary, stops the replay and reports the
/// offending command index.
ReplayResult replay(const std::vector<MotionCommand>& commands,
                    const SurfacePoint& start, const TriangleMesh& mesh);

}  // namespace luminav
