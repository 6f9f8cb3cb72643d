// Command-line front end: plan / bench / analyze-failure / replay.
//
// Exit codes: 0 success, 1 error (bad config, I/O, replay violation),
// 2 planner budget exhausted without reaching the goal.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "luminav/bench.hpp"
#include "luminav/failure.hpp"
#include "luminav/kinematics.hpp"
#include "luminav/log.hpp"
#include "luminav/mesh_io.hpp"
#include "luminav/planner.hpp"
#include "luminav/queries.hpp"
#include "luminav/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace luminav;

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

// Options shared by the mesh-driven subcommands. Flags win over the config
// file, which wins over the defaults listed here.
struct CommonOptions {
  std::string mesh;
  std::string format = "auto";
  double scale = 1.0;
  std::string goal;
  std::string target;
  std::string out = ".";
  bool bvh = false;
  PlannerConfig planner;
};

Vec3 to_vec3(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) throw ConfigError(std::string(what) + " needs 3 numbers");
  return Vec3(v[0], v[1], v[2]);
}

json load_config_json(const std::string& path) {
  if (path.empty()) return json::object();
  json j = json::parse(read_text_file(path));
  if (!j.is_object()) throw ConfigError("config file must be a JSON object");
  return j;
}

// Applies config-file values to fields whose flags were not given on the
// command line. `given` says whether the CLI option was seen.
template <typename T>
void merge_field(const json& cfg, const char* key, bool given, T& value) {
  if (!given && cfg.contains(key)) value = cfg.at(key).get<T>();
}

void merge_common(const json& cfg, const CLI::App& cmd, CommonOptions& opt) {
  const auto given = [&](const std::string& flag) {
    const CLI::Option* o = cmd.get_option_no_throw(flag);
    return o != nullptr && o->count() > 0;
  };
  merge_field(cfg, "mesh", given("--mesh"), opt.mesh);
  merge_field(cfg, "format", given("--format"), opt.format);
  merge_field(cfg, "scale", given("--scale"), opt.scale);
  merge_field(cfg, "goal", given("--goal"), opt.goal);
  merge_field(cfg, "target", given("--target"), opt.target);
  merge_field(cfg, "out", given("--out"), opt.out);
  merge_field(cfg, "bvh", given("--bvh"), opt.bvh);

  if (cfg.contains("planner")) {
    const json& p = cfg.at("planner");
    PlannerConfig& pc = opt.planner;
    merge_field(p, "step_size", false, pc.step_size);
    merge_field(p, "bend_threshold", false, pc.bend_threshold);
    merge_field(p, "max_iterations", given("--iterations"), pc.max_iterations);
    merge_field(p, "seed", given("--seed"), pc.seed);
    merge_field(p, "tip_scan_max", false, pc.tip_scan_max);
    if (p.contains("catheter_angle_deg"))
      pc.catheter_angle = p.at("catheter_angle_deg").get<double>() * kDegToRad;
  }
}

TriangleMesh load_configured_mesh(const CommonOptions& opt) {
  if (opt.mesh.empty()) throw ConfigError("no mesh given (--mesh or config)");
  TriangleMesh mesh =
      load_mesh(opt.mesh, parse_mesh_format(opt.format), opt.scale);
  if (opt.bvh) mesh.build_bvh();
  return mesh;
}

GoalRegion load_configured_goal(const CommonOptions& opt) {
  if (opt.goal.empty())
    throw ConfigError("no goal annotation given (--goal or config)");
  return load_goal_file(opt.goal, opt.target);
}

fs::path prepare_out_dir(const CommonOptions& opt) {
  fs::path dir(opt.out);
  fs::create_directories(dir);
  return dir;
}

// ---- plan ----------------------------------------------------------------

struct PlanArgs {
  CommonOptions common;
  std::vector<double> entry;
  std::vector<double> axis;
};

int run_plan(const PlanArgs& args) {
  const CommonOptions& opt = args.common;
  const TriangleMesh mesh = load_configured_mesh(opt);
  PlannerConfig config = opt.planner;
  config.goal = load_configured_goal(opt);
  config.validate();

  const Vec3 entry = to_vec3(args.entry, "--entry");
  const Vec3 axis_raw = to_vec3(args.axis, "--axis");
  if (axis_raw.norm() < kDegenerateLength)
    throw ConfigError("--axis is degenerate");
  const auto start = resolve_start(mesh, entry, axis_raw.normalized());
  if (!start) throw ConfigError("wire axis never meets the anatomy wall");

  const PlanResult result = plan(mesh, *start, config);
  const auto commands = compile_path(result.path, mesh);

  const fs::path dir = prepare_out_dir(opt);
  write_text_file((dir / "plan.json").string(), plan_to_json(result, config));
  write_text_file((dir / "commands.csv").string(), commands_to_csv(commands));
  write_text_file((dir / "commands.json").string(),
                  commands_to_json(commands));
  write_text_file((dir / "path.txt").string(),
                  polyline_to_text(path_positions(result.path)));

  const bool reached = result.status == PlanStatus::reached;
  std::cout << "status: " << (reached ? "reached" : "budget_exhausted")
            << "\niterations: " << result.iterations_used
            << "\ntree_size: " << result.tree_size
            << "\npath_nodes: " << result.path.size()
            << "\ncommands: " << commands.size()
            << "\nwall_time_seconds: " << result.wall_time_seconds << "\n";
  return reached ? 0 : 2;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  CommonOptions common;
  int trials = 100;
  int workers = 0;
  int grid_step = 1000;
  std::vector<double> inlet_center;
  std::vector<double> inlet_axis;
  double inlet_radius = 0.0;
  std::vector<int> timing_checkpoints;
  bool exclude_unresolved = false;
};

void merge_bench(const json& cfg, const CLI::App& cmd, BenchArgs& args) {
  if (!cfg.contains("bench")) return;
  const json& b = cfg.at("bench");
  const auto given = [&](const std::string& flag) {
    const CLI::Option* o = cmd.get_option_no_throw(flag);
    return o != nullptr && o->count() > 0;
  };
  merge_field(b, "trials", given("--trials"), args.trials);
  merge_field(b, "workers", given("--workers"), args.workers);
  merge_field(b, "grid_step", given("--grid-step"), args.grid_step);
  merge_field(b, "exclude_unresolved", given("--exclude-unresolved"),
              args.exclude_unresolved);
  merge_field(b, "timing_checkpoints", given("--timing-checkpoints"),
              args.timing_checkpoints);
  if (b.contains("inlet")) {
    const json& d = b.at("inlet");
    if (!given("--inlet-center") && d.contains("center"))
      args.inlet_center = d.at("center").get<std::vector<double>>();
    if (!given("--inlet-axis") && d.contains("axis"))
      args.inlet_axis = d.at("axis").get<std::vector<double>>();
    merge_field(d, "radius", given("--inlet-radius"), args.inlet_radius);
  }
}

int run_bench(const BenchArgs& args) {
  const CommonOptions& opt = args.common;
  const TriangleMesh mesh = load_configured_mesh(opt);
  PlannerConfig config = opt.planner;
  config.goal = load_configured_goal(opt);
  config.validate();

  InletDisk inlet;
  inlet.center = to_vec3(args.inlet_center, "--inlet-center");
  inlet.axis = to_vec3(args.inlet_axis, "--inlet-axis");
  inlet.radius = args.inlet_radius;
  inlet.validate();

  TrialOptions trial_options;
  trial_options.workers = args.workers;
  trial_options.target_label = opt.target.empty() ? "goal" : opt.target;

  const auto reports =
      run_trials(mesh, inlet, config, args.trials, trial_options);

  std::vector<int> grid;
  for (int k = args.grid_step; k <= config.max_iterations; k += args.grid_step)
    grid.push_back(k);
  if (grid.empty() || grid.back() != config.max_iterations)
    grid.push_back(config.max_iterations);
  const SuccessCurve curve =
      success_curve(reports, grid, 0.95, args.exclude_unresolved);

  const fs::path dir = prepare_out_dir(opt);
  write_text_file((dir / "trials.json").string(), trials_to_json(reports));
  write_text_file((dir / "curve.csv").string(), curve_to_csv(curve));
  write_text_file((dir / "trial_timing.csv").string(),
                  trial_timing_to_csv(reports));

  // Timing profile on a dedicated run from the first resolved start. The
  // timing files are measurements: unlike trials.json/curve.csv they are
  // not expected to be byte-identical across runs.
  const TrialReport* resolved = nullptr;
  for (const auto& r : reports)
    if (r.start_resolved()) {
      resolved = &r;
      break;
    }
  if (resolved) {
    std::vector<int> checkpoints = args.timing_checkpoints;
    if (checkpoints.empty())
      for (int k = 1; k <= 10; ++k)
        checkpoints.push_back(std::max(1, config.max_iterations / 10) * k);
    const auto rows =
        timing_profile(mesh, *resolved->start, config, checkpoints);
    write_text_file((dir / "timing.csv").string(), timing_to_csv(rows));
  } else {
    log_warn("no trial start resolved; skipping the timing profile");
  }

  int reached = 0;
  for (const auto& r : reports)
    if (r.status == PlanStatus::reached) ++reached;
  std::cout << "trials: " << reports.size() << "\nreached: " << reached
            << "\nfinal_fraction: " << curve.fraction.back() << "\n";
  return 0;
}

// ---- analyze-failure ------------------------------------------------------

struct FailureArgs {
  CommonOptions common;  // only `out` is used
  std::string inventory;
  std::vector<double> alpha_range{25.0, 90.0, 10};   // deg: min max count
  std::vector<double> radius_range{1.0, 6.0, 10};    // mm
  std::vector<double> length_range{2.0, 15.0, 10};   // mm
  std::vector<double> theta_deg{15.0, 30.0, 45.0, 90.0, 120.0};
};

std::vector<double> linear_grid(const std::vector<double>& spec,
                                const char* what) {
  if (spec.size() != 3 || spec[2] < 1.0)
    throw ConfigError(std::string(what) + " needs MIN MAX COUNT");
  const int n = static_cast<int>(spec[2]);
  std::vector<double> values;
  if (n == 1) {
    values.push_back(spec[0]);
    return values;
  }
  for (int i = 0; i < n; ++i)
    values.push_back(spec[0] + (spec[1] - spec[0]) * i / (n - 1));
  return values;
}

void merge_failure(const json& cfg, const CLI::App& cmd, FailureArgs& args) {
  if (!cfg.contains("failure")) return;
  const json& f = cfg.at("failure");
  const auto given = [&](const std::string& flag) {
    const CLI::Option* o = cmd.get_option_no_throw(flag);
    return o != nullptr && o->count() > 0;
  };
  merge_field(f, "inventory", given("--inventory"), args.inventory);
  merge_field(f, "alpha_range_deg", given("--alpha-range"), args.alpha_range);
  merge_field(f, "radius_range", given("--radius-range"), args.radius_range);
  merge_field(f, "length_range", given("--length-range"), args.length_range);
  merge_field(f, "theta_deg", given("--theta-deg"), args.theta_deg);
}

int run_analyze_failure(const FailureArgs& args) {
  const auto alphas = linear_grid(args.alpha_range, "--alpha-range");
  const auto radii = linear_grid(args.radius_range, "--radius-range");
  const auto lengths = linear_grid(args.length_range, "--length-range");
  if (args.theta_deg.empty()) throw ConfigError("--theta-deg needs values");

  std::vector<FailureGridRow> rows;
  for (double alpha_deg : alphas)
    for (double theta_deg : args.theta_deg)
      for (double length : lengths)
        for (double radius : radii) {
          FailureQuery q;
          q.branch_radius = radius;
          q.tip_length = length;
          q.takeoff_angle = alpha_deg * kDegToRad;
          q.bend_angle = theta_deg * kDegToRad;
          FailureGridRow row;
          row.takeoff_angle = q.takeoff_angle;
          row.bend_angle = q.bend_angle;
          row.tip_length = length;
          row.branch_radius = radius;
          row.deviation = lateral_deviation(q);
          row.fails = launch_fails(q);
          rows.push_back(row);
        }

  const fs::path dir = prepare_out_dir(args.common);
  write_text_file((dir / "failure_grid.csv").string(),
                  failure_grid_to_csv(rows));
  std::cout << "grid_rows: " << rows.size() << "\n";

  if (!args.inventory.empty()) {
    const ToolInventory inventory = load_inventory_file(args.inventory);
    std::string csv =
        "alpha_rad,branch_radius_mm,tool,theta_rad,tip_length_mm,"
        "predicted_deviation_mm,feasible\n";
    for (double alpha_deg : alphas)
      for (double radius : radii) {
        const double alpha = alpha_deg * kDegToRad;
        const ToolSelection sel = select_tool(inventory, alpha, radius);
        csv += format_double(alpha);
        csv += ',';
        csv += format_double(radius);
        csv += ',';
        csv += sel.tool.name;
        csv += ',';
        csv += format_double(sel.tool.bend_angle);
        csv += ',';
        csv += format_double(sel.tool.tip_length);
        csv += ',';
        csv += format_double(sel.predicted_deviation);
        csv += ',';
        csv += sel.feasible ? '1' : '0';
        csv += '\n';
      }
    write_text_file((dir / "tool_selection.csv").string(), csv);
  }
  return 0;
}

// ---- replay -----------------------------------------------------------------

struct ReplayArgs {
  CommonOptions common;
  std::string commands_path;
  std::string plan_path;
};

int run_replay(const ReplayArgs& args) {
  const CommonOptions& opt = args.common;
  const TriangleMesh mesh = load_configured_mesh(opt);
  const PlanDocument doc = plan_from_json(read_text_file(args.plan_path));
  if (doc.path.empty())
    throw ConfigError("plan has no path to replay (budget exhausted?)");

  auto commands = commands_from_csv(read_text_file(args.commands_path));
  attach_command_geometry(commands, doc.path);

  const ReplayResult result = replay(commands, doc.path.front().point, mesh);

  const fs::path dir = prepare_out_dir(opt);
  write_text_file((dir / "trajectory.txt").string(),
                  polyline_to_text(result.trajectory));
  std::string contacts = "x,y,z,face_id\n";
  for (const SurfacePoint& c : result.contacts) {
    contacts += format_double(c.position.x());
    contacts += ',';
    contacts += format_double(c.position.y());
    contacts += ',';
    contacts += format_double(c.position.z());
    contacts += ',';
    contacts += std::to_string(c.face_id);
    contacts += '\n';
  }
  write_text_file((dir / "contacts.csv").string(), contacts);

  if (!result.ok()) {
    std::cerr << "replay violation at command "
              << result.violation->command_index << ": "
              << result.violation->message << "\n";
    return 1;
  }
  std::cout << "replay ok: " << result.trajectory.size() << " vertices, "
            << result.contacts.size() << " contacts\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contact-aware planning over vascular surface meshes"};
  app.require_subcommand(1);

  std::string config_path;

  const auto add_common = [&](CLI::App* cmd, CommonOptions& opt,
                              bool needs_mesh) {
    cmd->add_option("--config", config_path,
                    "JSON config file; flags override its values");
    if (needs_mesh) {
      cmd->add_option("--mesh", opt.mesh, "surface mesh file");
      cmd->add_option("--format", opt.format,
                      "mesh format: auto|stl-binary|stl-ascii|obj");
      cmd->add_option("--scale", opt.scale, "coordinate scale applied at load");
      cmd->add_flag("--bvh", opt.bvh, "accelerate geometry queries");
    }
    cmd->add_option("--out", opt.out, "output directory")
        ->envname("LUMINAV_OUT");
    cmd->add_option("--seed", opt.planner.seed, "random seed");
    cmd->add_option("--iterations", opt.planner.max_iterations,
                    "iteration budget");
  };
  const auto add_goal = [](CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--goal", opt.goal, "goal face annotation (JSON)");
    cmd->add_option("--target", opt.target, "named target inside the goal file");
  };

  PlanArgs plan_args;
  CLI::App* plan_cmd =
      app.add_subcommand("plan", "grow one tree and compile its path");
  add_common(plan_cmd, plan_args.common, true);
  add_goal(plan_cmd, plan_args.common);
  plan_cmd->add_option("--entry", plan_args.entry,
                       "wire entry point (x y z, mm)")->expected(3);
  plan_cmd->add_option("--axis", plan_args.axis,
                       "wire axis direction (x y z)")->expected(3);

  BenchArgs bench_args;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "seeded trial study with success curve");
  add_common(bench_cmd, bench_args.common, true);
  add_goal(bench_cmd, bench_args.common);
  bench_cmd->add_option("--trials", bench_args.trials, "number of trials");
  bench_cmd->add_option("--workers", bench_args.workers,
                        "parallel workers (0 = hardware)");
  bench_cmd->add_option("--grid-step", bench_args.grid_step,
                        "success-curve grid spacing");
  bench_cmd->add_option("--inlet-center", bench_args.inlet_center,
                        "entry disk center (x y z)")->expected(3);
  bench_cmd->add_option("--inlet-axis", bench_args.inlet_axis,
                        "entry disk axis (x y z)")->expected(3);
  bench_cmd->add_option("--inlet-radius", bench_args.inlet_radius,
                        "entry disk radius (mm)");
  bench_cmd->add_option("--timing-checkpoints", bench_args.timing_checkpoints,
                        "iteration counts for the timing profile");
  bench_cmd->add_flag("--exclude-unresolved", bench_args.exclude_unresolved,
                      "drop unresolved starts from curve denominators");

  FailureArgs failure_args;
  CLI::App* failure_cmd = app.add_subcommand(
      "analyze-failure", "launch failure-bound grid and tool selection");
  add_common(failure_cmd, failure_args.common, false);
  failure_cmd->add_option("--inventory", failure_args.inventory,
                          "catheter inventory JSON");
  failure_cmd->add_option("--alpha-range", failure_args.alpha_range,
                          "takeoff angle grid: MIN MAX COUNT (deg)")
      ->expected(3);
  failure_cmd->add_option("--radius-range", failure_args.radius_range,
                          "branch radius grid: MIN MAX COUNT (mm)")
      ->expected(3);
  failure_cmd->add_option("--length-range", failure_args.length_range,
                          "tip length grid: MIN MAX COUNT (mm)")
      ->expected(3);
  failure_cmd->add_option("--theta-deg", failure_args.theta_deg,
                          "bend angles to evaluate (deg)")
      ->expected(-1);

  ReplayArgs replay_args;
  CLI::App* replay_cmd = app.add_subcommand(
      "replay", "forward-kinematic validation of a command file");
  add_common(replay_cmd, replay_args.common, true);
  replay_cmd->add_option("--commands", replay_args.commands_path,
                         "command CSV from plan");
  replay_cmd->add_option("--plan", replay_args.plan_path,
                         "plan JSON the commands came from");

  CLI11_PARSE(app, argc, argv);

  try {
    const json cfg = load_config_json(config_path);

    if (plan_cmd->parsed()) {
      merge_common(cfg, *plan_cmd, plan_args.common);
      if (plan_args.entry.empty() && cfg.contains("start"))
        plan_args.entry = cfg.at("start").at("entry").get<std::vector<double>>();
      if (plan_args.axis.empty() && cfg.contains("start"))
        plan_args.axis = cfg.at("start").at("axis").get<std::vector<double>>();
      return run_plan(plan_args);
    }
    if (bench_cmd->parsed()) {
      merge_common(cfg, *bench_cmd, bench_args.common);
      merge_bench(cfg, *bench_cmd, bench_args);
      return run_bench(bench_args);
    }
    if (failure_cmd->parsed()) {
      merge_common(cfg, *failure_cmd, failure_args.common);
      merge_failure(cfg, *failure_cmd, failure_args);
      return run_analyze_failure(failure_args);
    }
    if (replay_cmd->parsed()) {
      merge_common(cfg, *replay_cmd, replay_args.common);
      return run_replay(replay_args);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
