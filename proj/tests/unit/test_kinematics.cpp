#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "luminav/kinematics.hpp"
#include "luminav/mesh.hpp"
#include "luminav/planner.hpp"
#include "luminav/queries.hpp"
#include "luminav/types.hpp"

using namespace luminav;

namespace {

constexpr double kPi = 3.14159265358979323846;

GoalRegion faces_near(const TriangleMesh& mesh, const Vec3& center,
                      double radius) {
  GoalRegion goal;
  for (int f = 0; f < mesh.num_faces(); ++f)
    if ((mesh.face_centroid(f) - center).norm() <= radius)
      goal.face_ids.insert(f);
  return goal;
}

PlanResult plan_on_cylinder(const TriangleMesh& mesh, std::uint64_t seed) {
  PlannerConfig config;
  config.goal = faces_near(mesh, Vec3(0, 0, 25.0), 1.6);  // top-cap fan
  config.max_iterations = 8000;
  config.seed = seed;
  const auto start =
      resolve_start(mesh, Vec3(0, 0, 2.0), Vec3(1, 0, 0.05).normalized());
  REQUIRE(start.has_value());
  return plan(mesh, *start, config);
}

}  // namespace

// ---- ik_wire_step ----------------------------------------------------------

TEST_CASE("wire step insertion and rotation conventions") {
  ToolState state;
  state.wire_tip_tangent = Vec3(1, 0, 0);

  SurfacePoint from, to;
  from.position = Vec3(0, 0, 0);
  to.position = Vec3(0, 0, 0);

  SUBCASE("zero displacement gives zero insertion") {
    const MotionCommand cmd =
        ik_wire_step(from, to, Vec3(0, 0, 1), state);
    CHECK(cmd.tool == Tool::guidewire);
    CHECK(cmd.insertion_mm == 0.0);
  }

  SUBCASE("tangent perpendicular to the wall normal: no rotation") {
    to.position = Vec3(3, 0, 0);
    const MotionCommand cmd = ik_wire_step(from, to, Vec3(0, 0, 1), state);
    CHECK(cmd.insertion_mm == doctest::Approx(3.0));
    CHECK(cmd.rotation_rad == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("tangent parallel to the normal: quarter-turn by convention") {
    const MotionCommand cmd = ik_wire_step(from, to, Vec3(1, 0, 0), state);
    CHECK(cmd.rotation_rad == doctest::Approx(kPi / 2.0));
  }

  SUBCASE("anti-parallel tangent: negative quarter turn (signed form)") {
    const MotionCommand cmd = ik_wire_step(from, to, Vec3(-1, 0, 0), state);
    CHECK(cmd.rotation_rad == doctest::Approx(-kPi / 2.0));
  }

  SUBCASE("rotations always land in (-pi, pi]") {
    for (double a = -3.1; a <= 3.1; a += 0.17) {
      const Vec3 n(std::cos(a), std::sin(a), 0.0);
      const MotionCommand cmd = ik_wire_step(from, to, n, state);
      CHECK(cmd.rotation_rad <= kPi);
      CHECK(cmd.rotation_rad > -kPi);
      CHECK(std::abs(cmd.rotation_rad) <= kPi / 2.0 + 1e-12);
    }
  }
}

// ---- ik_launch_step --------------------------------------------------------

TEST_CASE("launch step: insertion distances restate the geometry") {
  ToolState state;
  state.wire_tip_tangent = Vec3(1, 0, 0);
  state.catheter_tip_tangent = Vec3(1, 0, 0);

  SurfacePoint q_near, q_sample;
  q_near.position = Vec3(0, 0, 0);
  q_sample.position = Vec3(6, 0, 8);
  const Vec3 q_tip(3, 0, 4);

  const auto [catheter, wire] =
      ik_launch_step(q_near, q_tip, q_sample, Vec3(0, 0, -1), state);
  CHECK(catheter.tool == Tool::catheter);
  CHECK(wire.tool == Tool::guidewire);
  CHECK(catheter.insertion_mm == doctest::Approx((q_tip).norm()));
  CHECK(wire.insertion_mm ==
        doctest::Approx((q_sample.position - q_tip).norm()));

  SUBCASE("catheter tangent along s gives the quarter-turn convention") {
    ToolState aligned = state;
    aligned.catheter_tip_tangent =
        (q_sample.position - q_tip).normalized();
    const auto [c2, w2] =
        ik_launch_step(q_near, q_tip, q_sample, Vec3(0, 0, -1), aligned);
    CHECK(c2.rotation_rad == doctest::Approx(kPi / 2.0));
  }

  SUBCASE("degenerate tip-to-sample vector is rejected") {
    SurfacePoint on_tip;
    on_tip.position = q_tip;
    CHECK_THROWS_AS(
        ik_launch_step(q_near, q_tip, on_tip, Vec3(0, 0, -1), state),
        KinematicsError);
  }
}

// ---- compile_path ----------------------------------------------------------

TEST_CASE("single-node path compiles to nothing") {
  const TriangleMesh mesh = testsupport::unit_tetrahedron();
  std::vector<TreeNode> path(1);
  path[0].point = mesh.surface_point(0, 0.3, 0.3);
  path[0].primitive = Primitive::root;
  CHECK(compile_path(path, mesh).empty());
}

TEST_CASE("glide chain on a plane: insertions equal edge lengths") {
  const TriangleMesh mesh = testsupport::plane_grid(10, 10, 1.0);
  std::vector<TreeNode> path(3);
  path[0].point = project_to_closest_surface(mesh, Vec3(2.2, 5.0, 0));
  path[0].primitive = Primitive::root;
  path[1].point = project_to_closest_surface(mesh, Vec3(4.2, 5.0, 0));
  path[1].parent = 0;
  path[1].primitive = Primitive::glide;
  path[1].steer = Vec3(1, 0, 0);
  path[2].point = project_to_closest_surface(mesh, Vec3(5.7, 5.0, 0));
  path[2].parent = 1;
  path[2].primitive = Primitive::glide;
  path[2].steer = Vec3(1, 0, 0);

  const auto commands = compile_path(path, mesh);
  REQUIRE(commands.size() == 2);
  CHECK(commands[0].tool == Tool::guidewire);
  CHECK(commands[0].insertion_mm == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(commands[1].insertion_mm == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(commands[0].source_node == 1);
  CHECK(commands[1].source_node == 2);
  CHECK(commands[0].kind == CommandKind::glide);
}

TEST_CASE("compiling twice yields identical commands") {
  const TriangleMesh mesh = testsupport::capped_cylinder(2.0, 25.0, 48, 10);
  const PlanResult result = plan_on_cylinder(mesh, 3);
  REQUIRE(result.status == PlanStatus::reached);
  const auto a = compile_path(result.path, mesh);
  const auto b = compile_path(result.path, mesh);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].tool == b[i].tool);
    CHECK(a[i].insertion_mm == b[i].insertion_mm);  // bitwise
    CHECK(a[i].rotation_rad == b[i].rotation_rad);
    CHECK(a[i].source_node == b[i].source_node);
  }
}

// ---- replay ----------------------------------------------------------------

TEST_CASE("replay of an empty command list stays at the start") {
  const TriangleMesh mesh = testsupport::unit_tetrahedron();
  const SurfacePoint start = mesh.surface_point(0, 0.3, 0.3);
  const ReplayResult r = replay({}, start, mesh);
  CHECK(r.ok());
  REQUIRE(r.trajectory.size() == 1);
  CHECK((r.trajectory[0] - start.position).norm() == 0.0);
  CHECK(r.contacts.empty());
}

TEST_CASE("round-trip: replay reproduces planner nodes on mixed paths") {
  const TriangleMesh mesh = testsupport::capped_cylinder(2.0, 25.0, 48, 10);
  for (const std::uint64_t seed : {0ull, 4ull, 9ull, 21ull}) {
    const PlanResult result = plan_on_cylinder(mesh, seed);
    if (result.status != PlanStatus::reached) continue;
    const auto commands = compile_path(result.path, mesh);
    const ReplayResult r =
        replay(commands, result.path.front().point, mesh);
    REQUIRE(r.ok());
    // One wall contact per non-root path node, each within 1e-6 mm.
    REQUIRE(r.contacts.size() == result.path.size() - 1);
    for (size_t i = 1; i < result.path.size(); ++i) {
      CHECK((r.contacts[i - 1].position - result.path[i].point.position)
                .norm() < 1e-6);
    }
    // Arc-length bookkeeping: insertions sum to the trajectory length.
    double insertion_total = 0.0;
    for (const MotionCommand& c : commands) insertion_total += c.insertion_mm;
    double trajectory_length = 0.0;
    for (size_t i = 1; i < r.trajectory.size(); ++i)
      trajectory_length += (r.trajectory[i] - r.trajectory[i - 1]).norm();
    CHECK(insertion_total ==
          doctest::Approx(trajectory_length).epsilon(1e-9));
  }
}

TEST_CASE("oversized rebound insertion is flagged as wall penetration") {
  const TriangleMesh mesh = testsupport::capped_cylinder(2.0, 25.0, 48, 10);
  const PlanResult result = plan_on_cylinder(mesh, 3);
  REQUIRE(result.status == PlanStatus::reached);
  auto commands = compile_path(result.path, mesh);
  // Find a wall-approaching command and inflate its insertion well past
  // the wall distance.
  int corrupted = -1;
  for (size_t i = 0; i < commands.size(); ++i) {
    if (commands[i].kind == CommandKind::rebound ||
        commands[i].kind == CommandKind::launch_wire) {
      commands[i].insertion_mm += 5.0;
      corrupted = static_cast<int>(i);
      break;
    }
  }
  if (corrupted < 0) {
    // All-glide path: inflating a glide stays wall-bound, so instead aim
    // the first glide's direction through the wall by replaying it as a
    // rebound-style command.
    commands[0].kind = CommandKind::rebound;
    commands[0].direction = -mesh.face_normal(
        result.path[0].point.face_id);  // straight out of the lumen
    commands[0].insertion_mm = 50.0;
    corrupted = 0;
  }
  const ReplayResult r = replay(commands, result.path.front().point, mesh);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violation->command_index == corrupted);
}

TEST_CASE("replay rejects vertices that leave the anatomy") {
  // A hcollinear free-flight that shoots out the open end of a tube.
  const TriangleMesh tube = testsupport::open_cylinder(2.0, 10.0, 24, 4);
  const auto start = resolve_start(tube, Vec3(0, 0, 5.0), Vec3(1, 0, 0));
  REQUIRE(start.has_value());
  MotionCommand escape;
  escape.tool = Tool::guidewire;
  escape.kind = CommandKind::rebound;
  escape.direction = Vec3(0, 0, 1);
  escape.insertion_mm = 50.0;  // far past the open top
  escape.source_node = 1;
  const ReplayResult r = replay({escape}, *start, tube);
  CHECK_FALSE(r.ok());
  CHECK(r.violation->command_index == 0);
}

TEST_CASE("compile_path surfaces the offending node id on bad geometry") {
  const TriangleMesh mesh = testsupport::plane_grid(4, 4, 1.0);
  std::vector<TreeNode> path(2);
  path[0].point = project_to_closest_surface(mesh, Vec3(1.5, 1.5, 0));
  path[0].primitive = Primitive::root;
  path[1].point = project_to_closest_surface(mesh, Vec3(2.5, 1.5, 0));
  path[1].parent = 0;
  path[1].primitive = Primitive::launch;
  path[1].steer = Vec3(1, 0, 0);
  path[1].tip_point = path[1].point.position;  // tip == landing: degenerate
  try {
    compile_path(path, mesh);
    FAIL("expected KinematicsError");
  } catch (const KinematicsError& e) {
    CHECK(e.node_id == 1);
  }
}
