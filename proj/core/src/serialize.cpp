#include "luminav/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace luminav {

using nlohmann::json;

namespace {

json vec3_to_json(const Vec3& v) {
  return json::array({v.x(), v.y(), v.z()});
}

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3)
    throw IoError("expected a 3-element array for a vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json config_to_json(const PlannerConfig& config) {
  std::vector<int> faces(config.goal.face_ids.begin(),
                         config.goal.face_ids.end());
  std::sort(faces.begin(), faces.end());
  return json{{"step_size", config.step_size},
              {"bend_threshold", config.bend_threshold},
              {"catheter_angle", config.catheter_angle},
              {"max_iterations", config.max_iterations},
              {"seed", config.seed},
              {"tip_scan_max", config.tip_scan_max},
              {"goal_faces", faces}};
}

PlannerConfig config_from_json(const json& j) {
  PlannerConfig config;
  config.step_size = j.at("step_size").get<double>();
  config.bend_threshold = j.at("bend_threshold").get<double>();
  config.catheter_angle = j.at("catheter_angle").get<double>();
  config.max_iterations = j.at("max_iterations").get<int>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.tip_scan_max = j.at("tip_scan_max").get<double>();
  for (const auto& f : j.at("goal_faces"))
    config.goal.face_ids.insert(f.get<int>());
  return config;
}

json node_to_json(const TreeNode& node) {
  json j{{"position", vec3_to_json(node.point.position)},
         {"face_id", node.point.face_id},
         {"primitive", primitive_name(node.primitive)},
         {"steer", vec3_to_json(node.steer)}};
  if (node.tip_point) j["tip_point"] = vec3_to_json(*node.tip_point);
  return j;
}

TreeNode node_from_json(const json& j) {
  TreeNode node;
  node.point.position = vec3_from_json(j.at("position"));
  node.point.face_id = j.at("face_id").get<int>();
  node.primitive = parse_primitive(j.at("primitive").get<std::string>());
  node.steer = vec3_from_json(j.at("steer"));
  if (j.contains("tip_point")) node.tip_point = vec3_from_json(j.at("tip_point"));
  return node;
}

const char* status_name(PlanStatus status) {
  return status == PlanStatus::reached ? "reached" : "budget_exhausted";
}

PlanStatus parse_status(const std::string& name) {
  if (name == "reached") return PlanStatus::reached;
  if (name == "budget_exhausted") return PlanStatus::budget_exhausted;
  throw IoError("unknown plan status '" + name + "'");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

double parse_double(const std::string& text) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw IoError("malformed number '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw IoError("malformed number '" + text + "'");
  }
}

int parse_int(const std::string& text) {
  try {
    size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size())
      throw IoError("malformed integer '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw IoError("malformed integer '" + text + "'");
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out.good()) throw IoError("write failed: " + path);
}

std::string plan_to_json(const PlanResult& result, const PlannerConfig& config,
                         bool include_timing) {
  json j{{"config", config_to_json(config)},
         {"status", status_name(result.status)},
         {"iterations", result.iterations_used},
         {"tree_size", result.tree_size}};
  if (result.first_goal_iteration)
    j["first_goal_iteration"] = *result.first_goal_iteration;
  json path = json::array();
  for (const TreeNode& node : result.path) path.push_back(node_to_json(node));
  j["path"] = std::move(path);
  if (include_timing) j["wall_time_seconds"] = result.wall_time_seconds;
  return j.dump(2) + "\n";
}

PlanDocument plan_from_json(const std::string& json_text) {
  const json j = json::parse(json_text);
  PlanDocument doc;
  doc.config = config_from_json(j.at("config"));
  doc.status = parse_status(j.at("status").get<std::string>());
  doc.iterations_used = j.at("iterations").get<int>();
  doc.tree_size = j.at("tree_size").get<int>();
  for (const auto& n : j.at("path")) doc.path.push_back(node_from_json(n));
  return doc;
}

std::string polyline_to_text(const std::vector<Vec3>& points) {
  std::string out;
  for (const Vec3& p : points) {
    out += format_double(p.x());
    out += ' ';
    out += format_double(p.y());
    out += ' ';
    out += format_double(p.z());
    out += '\n';
  }
  return out;
}

std::vector<Vec3> path_positions(const std::vector<TreeNode>& path) {
  std::vector<Vec3> points;
  points.reserve(path.size());
  for (const TreeNode& node : path) points.push_back(node.point.position);
  return points;
}

std::string commands_to_csv(const std::vector<MotionCommand>& commands) {
  std::string out = "tool,insertion_mm,rotation_rad,source_node\n";
  for (const MotionCommand& cmd : commands) {
    out += tool_name(cmd.tool);
    out += ',';
    out += format_double(cmd.insertion_mm);
    out += ',';
    out += format_double(cmd.rotation_rad);
    out += ',';
    out += std::to_string(cmd.source_node);
    out += '\n';
  }
  return out;
}

std::vector<MotionCommand> commands_from_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "tool,insertion_mm,rotation_rad,source_node")
    throw IoError("command CSV must start with the actuation header");
  std::vector<MotionCommand> commands;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4)
      throw IoError("command CSV row needs 4 fields: " + line);
    MotionCommand cmd;
    cmd.tool = parse_tool(fields[0]);
    cmd.insertion_mm = parse_double(fields[1]);
    cmd.rotation_rad = parse_double(fields[2]);
    cmd.source_node = parse_int(fields[3]);
    commands.push_back(cmd);
  }
  return commands;
}

std::string commands_to_json(const std::vector<MotionCommand>& commands) {
  json arr = json::array();
  for (const MotionCommand& cmd : commands) {
    arr.push_back(json{{"tool", tool_name(cmd.tool)},
                       {"insertion_mm", cmd.insertion_mm},
                       {"rotation_rad", cmd.rotation_rad},
                       {"source_node", cmd.source_node},
                       {"kind", command_kind_name(cmd.kind)},
                       {"direction", vec3_to_json(cmd.direction)}});
  }
  return arr.dump(2) + "\n";
}

std::vector<MotionCommand> commands_from_json(const std::string& json_text) {
  const json arr = json::parse(json_text);
  if (!arr.is_array()) throw IoError("command JSON must be an array");
  std::vector<MotionCommand> commands;
  for (const auto& j : arr) {
    MotionCommand cmd;
    cmd.tool = parse_tool(j.at("tool").get<std::string>());
    cmd.insertion_mm = j.at("insertion_mm").get<double>();
    cmd.rotation_rad = j.at("rotation_rad").get<double>();
    cmd.source_node = j.at("source_node").get<int>();
    cmd.kind = parse_command_kind(j.at("kind").get<std::string>());
    cmd.direction = vec3_from_json(j.at("direction"));
    commands.push_back(cmd);
  }
  return commands;
}

void attach_command_geometry(std::vector<MotionCommand>& commands,
                             const std::vector<TreeNode>& path) {
  for (MotionCommand& cmd : commands) {
    if (cmd.source_node < 1 ||
        cmd.source_node >= static_cast<int>(path.size()))
      throw ConfigError("command source_node " +
                        std::to_string(cmd.source_node) +
                        " is not a non-root path node");
    const TreeNode& node = path[cmd.source_node];
    const TreeNode& prev = path[cmd.source_node - 1];
    switch (node.primitive) {
      case Primitive::glide: {
        if (cmd.tool != Tool::guidewire)
          throw ConfigError("glide nodes compile to guidewire commands");
        const Vec3 chord = node.point.position - prev.point.position;
        const double len = chord.norm();
        if (len < kDegenerateLength)
          throw ConfigError("degenerate glide edge in plan path");
        cmd.kind = CommandKind::glide;
        cmd.direction = chord / len;
        break;
      }
      case Primitive::rebound:
        if (cmd.tool != Tool::guidewire)
          throw ConfigError("rebound nodes compile to guidewire commands");
        cmd.kind = CommandKind::rebound;
        cmd.direction = node.steer;
        break;
      case Primitive::launch: {
        if (!node.tip_point)
          throw ConfigError("launch node without tip_point in plan path");
        if (cmd.tool == Tool::catheter) {
          cmd.kind = CommandKind::launch_catheter;
          cmd.direction = node.steer;
        } else {
          cmd.kind = CommandKind::launch_wire;
          cmd.direction = (node.point.position - *node.tip_point).normalized();
        }
        break;
      }
      case Primitive::root:
        throw ConfigError("commands cannot source from the root node");
    }
  }
}

static GoalRegion load_goalregion_from_json(const json& j) {
  GoalRegion goal;
  for (const auto& f : j) goal.face_ids.insert(f.get<int>());
  return goal;
}

GoalRegion load_goal_file(const std::string& path, const std::string& target) {
  const json j = json::parse(read_text_file(path));
  if (j.is_array()) {
    if (!target.empty())
      throw ConfigError("goal file is a bare face list; no targets to select");
    return load_goalregion_from_json(j);
  }
  if (!j.is_object()) throw IoError("goal file must be an array or object");
  if (!target.empty()) {
    if (!j.contains(target))
      throw ConfigError("goal file has no target '" + target + "'");
    return load_goalregion_from_json(j.at(target));
  }
  if (j.contains("faces")) return load_goalregion_from_json(j.at("faces"));
  if (j.size() == 1) return load_goalregion_from_json(j.begin().value());
  throw ConfigError("goal file has multiple targets; pick one with --target");
}

std::vector<std::string> goal_file_targets(const std::string& path) {
  const json j = json::parse(read_text_file(path));
  std::vector<std::string> names;
  if (j.is_object())
    for (auto it = j.begin(); it != j.end(); ++it) names.push_back(it.key());
  std::sort(names.begin(), names.end());
  return names;
}

ToolInventory inventory_from_json(const std::string& json_text) {
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
  const json arr = json::parse(json_text);
  if (!arr.is_array()) throw IoError("inventory JSON must be an array");
  ToolInventory inventory;
  for (const auto& j : arr) {
    ToolSpec tool;
    tool.name = j.at("name").get<std::string>();
    tool.bend_angle = j.at("theta_deg").get<double>() * kDegToRad;
    tool.tip_length = j.at("length_mm").get<double>();
    inventory.tools.push_back(tool);
  }
  inventory.validate();
  return inventory;
}

ToolInventory load_inventory_file(const std::string& path) {
  return inventory_from_json(read_text_file(path));
}

std::string trials_to_json(const std::vector<TrialReport>& reports,
                           bool include_timing) {
  json arr = json::array();
  for (const TrialReport& r : reports) {
    json j{{"seed", r.seed},
           {"target", r.target},
           {"status", status_name(r.status)}};
    if (r.start)
      j["start"] = json{{"position", vec3_to_json(r.start->position)},
                        {"face_id", r.start->face_id}};
    else
      j["start"] = nullptr;
    if (r.iterations_to_success)
      j["iterations_to_success"] = *r.iterations_to_success;
    else
      j["iterations_to_success"] = nullptr;
    if (include_timing) j["per_iteration_seconds"] = r.per_iteration_seconds;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string curve_to_csv(const SuccessCurve& curve) {
  std::string out = "iteration,fraction,wilson_low,wilson_high\n";
  for (size_t k = 0; k < curve.grid.size(); ++k) {
    out += std::to_string(curve.grid[k]);
    out += ',';
    out += format_double(curve.fraction[k]);
    out += ',';
    out += format_double(curve.wilson_low[k]);
    out += ',';
    out += format_double(curve.wilson_high[k]);
    out += '\n';
  }
  return out;
}

std::string timing_to_csv(const std::vector<TimingRow>& rows) {
  std::string out =
      "iterations,cumulative_seconds,mean_per_iteration_seconds,tree_size\n";
  for (const TimingRow& row : rows) {
    out += std::to_string(row.iterations);
    out += ',';
    out += format_double(row.cumulative_seconds);
    out += ',';
    out += format_double(row.mean_per_iteration_seconds);
    out += ',';
    out += std::to_string(row.tree_size);
    out += '\n';
  }
  return out;
}

std::string trial_timing_to_csv(const std::vector<TrialReport>& reports) {
  std::string out = "seed,per_iteration_seconds\n";
  for (const TrialReport& r : reports) {
    out += std::to_string(r.seed);
    out += ',';
    out += format_double(r.per_iteration_seconds);
    out += '\n';
  }
  return out;
}

std::string failure_grid_to_csv(const std::vector<FailureGridRow>& rows) {
  std::string out =
      "alpha_rad,theta_rad,tip_length_mm,branch_radius_mm,deviation_mm,fails\n";
  for (const FailureGridRow& row : rows) {
    out += format_double(row.takeoff_angle);
    out += ',';
    out += format_double(row.bend_angle);
    out += ',';
    out += format_double(row.tip_length);
    out += ',';
    out += format_double(row.branch_radius);
    out += ',';
    out += format_double(row.deviation);
    out += ',';
    out += row.fails ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace luminav
