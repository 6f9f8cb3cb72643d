#include "luminav/kinematics.hpp"

#include <cmath>

#include "luminav/queries.hpp"

namespace luminav {

namespace {

// Wall re-contact and penetration tolerance for replay, mm. Matches the
// round-trip acceptance tolerance between planned nodes and replayed
// contacts.
constexpr double kContactTol = 1e-6;

double signed_rotation(const Vec3& tangent, const Vec3& reference) {
  return std::atan2(tangent.dot(reference), tangent.cross(reference).norm());
}

}  // namespace

const char* tool_name(Tool t) {
  return t == Tool::guidewire ? "guidewire" : "catheter";
}

const char* command_kind_name(CommandKind k) {
  switch (k) {
    case CommandKind::glide: return "glide";
    case CommandKind::rebound: return "rebound";
    case CommandKind::launch_catheter: return "launch_catheter";
    case CommandKind::launch_wire: return "launch_wire";
  }
  return "glide";
}

Tool parse_tool(const std::string& name) {
  if (name == "guidewire") return Tool::guidewire;
  if (name == "catheter") return Tool::catheter;
  throw ConfigError("unknown tool '" + name + "'");
}

CommandKind parse_command_kind(const std::string& name) {
  if (name == "glide") return CommandKind::glide;
  if (name == "rebound") return CommandKind::rebound;
  if (name == "launch_catheter") return CommandKind::launch_catheter;
  if (name == "launch_wire") return CommandKind::launch_wire;
  throw ConfigError("unknown command kind '" + name + "'");
}

MotionCommand ik_wire_step(const SurfacePoint& q_near, const SurfacePoint& q_new,
                           const Vec3& n_new, const ToolState& state) {
  MotionCommand cmd;
  cmd.tool = Tool::guidewire;
  cmd.insertion_mm = (q_new.position - q_near.position).norm();
  cmd.rotation_rad = signed_rotation(state.wire_tip_tangent, n_new);
  return cmd;
}

std::pair<MotionCommand, MotionCommand> ik_launch_step(
    const SurfacePoint& q_near, const Vec3& q_tip, const SurfacePoint& q_sample,
    const Vec3& n_landing, const ToolState& state) {
  const Vec3 s = q_sample.position - q_tip;
  const double s_len = s.norm();
  if (s_len < kDegenerateLength)
    throw KinematicsError("launch with degenerate tip-to-target direction", -1);

  MotionCommand catheter;
  catheter.tool = Tool::catheter;
  catheter.insertion_mm = (q_tip - q_near.position).norm();
  catheter.rotation_rad = signed_rotation(state.catheter_tip_tangent, s);

  MotionCommand wire;
  wire.tool = Tool::guidewire;
  wire.insertion_mm = s_len;
  wire.rotation_rad = signed_rotation(state.wire_tip_tangent, n_landing);
  return {catheter, wire};
}

std::vector<MotionCommand> compile_path(const std::vector<TreeNode>& path,
                                        const TriangleMesh& mesh) {
  std::vector<MotionCommand> commands;
  if (path.size() <= 1) return commands;

  // Before any motion the tools lie along the direction they will first be
  // driven in; the first command's rotation is measured from that pose.
  Vec3 first_dir;
  if (path[1].primitive == Primitive::launch) {
    first_dir = path[1].steer;
  } else {
    const Vec3 chord = path[1].point.position - path[0].point.position;
    const double len = chord.norm();
    if (len < kDegenerateLength)
      throw KinematicsError("degenerate first edge", 1);
    first_dir = chord / len;
  }

  ToolState state;
  state.wire_tip_tangent = first_dir;
  state.catheter_tip_tangent = first_dir;
  state.wire_tip_position = path[0].point.position;
  state.catheter_tip_position = path[0].point.position;

  for (size_t i = 1; i < path.size(); ++i) {
    const TreeNode& node = path[i];
    const SurfacePoint& from = path[i - 1].point;
    const int id = static_cast<int>(i);

    switch (node.primitive) {
      case Primitive::glide:
      case Primitive::rebound: {
        const Vec3 chord = node.point.position - from.position;
        const double len = chord.norm();
        if (len < kDegenerateLength)
          throw KinematicsError("degenerate wall-move edge", id);
        MotionCommand cmd = ik_wire_step(
            from, node.point, mesh.face_normal(node.point.face_id), state);
        if (node.primitive == Primitive::glide) {
          cmd.kind = CommandKind::glide;
          cmd.direction = chord / len;
        } else {
          // Replaying a rebound re-casts the original ray, so carry the
          // exact steer direction rather than the (parallel) chord.
          cmd.kind = CommandKind::rebound;
          cmd.direction = node.steer;
        }
        cmd.source_node = id;
        commands.push_back(cmd);
        state.wire_tip_tangent = chord / len;
        state.wire_tip_position = node.point.position;
        break;
      }
      case Primitive::launch: {
        if (!node.tip_point)
          throw KinematicsError("launch node without a tip point", id);
        const Vec3& tip = *node.tip_point;
        std::pair<MotionCommand, MotionCommand> pair;
        try {
          pair = ik_launch_step(from, tip, node.point,
                                mesh.face_normal(node.point.face_id), state);
        } catch (const KinematicsError& e) {
          throw KinematicsError(e.what(), id);
        }
        pair.first.kind = CommandKind::launch_catheter;
        pair.first.direction = node.steer;
        pair.first.source_node = id;
        pair.second.kind = CommandKind::launch_wire;
        pair.second.direction = (node.point.position - tip).normalized();
        pair.second.source_node = id;
        commands.push_back(pair.first);
        commands.push_back(pair.second);
        state.catheter_tip_tangent = node.steer;
        state.catheter_tip_position = tip;
        state.wire_tip_tangent = pair.second.direction;
        state.wire_tip_position = node.point.position;
        break;
      }
      case Primitive::root:
        throw KinematicsError("root primitive on a non-root path node", id);
    }
  }
  return commands;
}

ReplayResult replay(const std::vector<MotionCommand>& commands,
                    const SurfacePoint& start, const TriangleMesh& mesh) {
  ReplayResult result;
  Vec3 pos = start.position;
  int contact_face = start.face_id;  // -1 when the tip is mid-lumen
  result.trajectory.push_back(pos);

  const auto fail = [&](int idx, const std::string& msg) {
    result.violation = ReplayViolation{idx, msg};
  };

  for (size_t i = 0; i < commands.size(); ++i) {
    const MotionCommand& cmd = commands[i];
    const int idx = static_cast<int>(i);
    Vec3 vertex;

    switch (cmd.kind) {
      case CommandKind::glide: {
        // Advance along the wall and let the surface re-capture the tip.
        const Vec3 target = pos + cmd.insertion_mm * cmd.direction;
        const SurfacePoint sp = project_to_closest_surface(mesh, target);
        if ((sp.position - target).norm() > kContactTol) {
          fail(idx, "glide target left the wall");
          return result;
        }
        vertex = sp.position;
        contact_face = sp.face_id;
        result.contacts.push_back(sp);
        break;
      }
      case CommandKind::rebound:
      case CommandKind::launch_wire: {
        const Vec3 endpoint = pos + cmd.insertion_mm * cmd.direction;

        // Walk every facet crossing along the flight. A straight flight
        // that departs a wall tangentially can clip nanometer-deep slivers
        // of neighboring facets, and which slivers it clips flips with
        // one-ulp changes to the origin, so neither the crossing count nor
        // the along-ray distance to a crossing is a stable penetration
        // measure. What is stable is the depth of an excursion outside the
        // anatomy: for each span between consecutive crossings, if the span
        // midpoint lies outside, its distance back to the surface must stay
        // within tolerance.
        int excl = cmd.kind == CommandKind::rebound ? contact_face : -1;
        Vec3 from = pos;
        double t_cum = 0.0;
        bool first_cast_hit = false;
        std::vector<double> crossings;
        bool budget_ok = true;
        for (int guard = 0;; ++guard) {
          if (guard >= 1024) {
            budget_ok = false;
            break;
          }
          const auto hit =
              ray_intersect(mesh, Ray{from, cmd.direction}, excl, kMinRayT);
          if (!hit) break;
          if (guard == 0) first_cast_hit = true;
          t_cum += hit->distance;
          if (t_cum >= cmd.insertion_mm) break;
          crossings.push_back(t_cum);
          from = hit->point.position;
          excl = hit->point.face_id;
        }
        if (!budget_ok) {
          fail(idx, "flight crosses too many facets to validate");
          return result;
        }
        for (size_t k = 0; k < crossings.size(); ++k) {
          const double a = crossings[k];
          const double b =
              k + 1 < crossings.size() ? crossings[k + 1] : cmd.insertion_mm;
          const Vec3 mid = pos + (0.5 * (a + b)) * cmd.direction;
          if (inside_anatomy(mesh, mid)) continue;
          const SurfacePoint back = project_to_closest_surface(mesh, mid);
          if ((back.position - mid).norm() > kContactTol) {
            fail(idx, "insertion would penetrate the wall");
            return result;
          }
        }

        const SurfacePoint sp = project_to_closest_surface(mesh, endpoint);
        if ((sp.position - endpoint).norm() <= kContactTol) {
          vertex = sp.position;  // landed on the wall
          contact_face = sp.face_id;
          result.contacts.push_back(sp);
        } else if (!first_cast_hit) {
          fail(idx, "free flight leaves the anatomy");
          return result;
        } else {
          vertex = endpoint;  // stops mid-lumen
          contact_face = -1;
        }
        break;
      }
      case CommandKind::launch_catheter: {
        vertex = pos + cmd.insertion_mm * cmd.direction;
        contact_face = -1;  // catheter tip hangs in the lumen
        break;
      }
    }

    if (!inside_anatomy(mesh, vertex)) {
      fail(idx, "tip left the anatomy");
      return result;
    }
    pos = vertex;
    result.trajectory.push_back(pos);
  }
  return result;
}

}  // namespace luminav
