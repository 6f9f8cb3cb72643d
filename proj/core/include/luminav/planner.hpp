#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "luminav/mesh.hpp"
#include "luminav/types.hpp"

namespace luminav {

/// Parameters of the surface-constrained RRT. Linear units mm, angles rad.
struct PlannerConfig {
  double step_size = 2.0;        // wall-glide advance per extension
  double bend_threshold = 0.5;   // cosine gate on direction change, cos(60 deg)
  double catheter_angle = 0.7853981633974483;  // bent-tip angle, 45 deg
  int max_iterations = 60000;
  std::uint64_t seed = 0;
  double tip_scan_max = 20.0;    // largest catheter advance considered, mm
  GoalRegion goal;

  /// Throws ConfigError on out-of-range values. catheter_angle outside
  /// [30 deg, 90 deg] is allowed but logged, since the bent-tip model is
  /// typically specified in that range.
  void validate() const;
};

enum class Primitive { root, glide, rebound, launch };

const char* primitive_name(Primitive p);
Primitive parse_primitive(const std::string& name);

struct TreeNode {
  SurfacePoint point;
  int parent = -1;  // -1 only for the root
  Primitive primitive = Primitive::root;
  std::optional<Vec3> tip_point;  // present iff primitive == launch
  Vec3 steer = Vec3::Zero();      // unit steer direction that created the node
};

struct ConcavityResult {
  double kappa = 0.0;
  int adjacent_face = -1;  // -1 if the steer direction leaves an open boundary
};

enum class PlanStatus { reached, budget_exhausted };

struct PlanResult {
  PlanStatus status = PlanStatus::budget_exhausted;
  std::vector<TreeNode> path;  // root-first; empty unless status == reached
  int iterations_used = 0;
  int tree_size = 0;
  double wall_time_seconds = 0.0;  // iteration loop only; not deterministic
  std::vector<TreeNode> tree;      // full grown tree, insertion order
  int goal_node = -1;              // index into tree, -1 if never reached
  std::optional<int> first_goal_iteration;
};

/// Optional instrumentation for plan(). on_iteration fires after every
/// iteration (including skipped ones) with (iteration, tree size). With
/// stop_at_goal false the loop runs the full budget and only records when
/// the goal was first touched — used for timing and success-curve studies.
struct PlanHooks {
  std::function<void(int, int)> on_iteration;
  bool stop_at_goal = true;
};

/// Index of the tree node closest (Euclidean) to q_sample; ties go to the
/// lowest node id. Linear scan by design — the planner's cost model and
/// its timing claims are stated for linear-time nearest neighbor.
int find_nearest_node(const std::vector<TreeNode>& tree,
                      const SurfacePoint& q_sample);

/// Tangent-plane projection of (q_sample - q_near): d - (d.n) n. Returned
/// unnormalized; callers normalize for directional use and must treat
/// norms below kDegenerateLength as "no direction".
Vec3 compute_steer_vector(const SurfacePoint& q_near,
                          const SurfacePoint& q_sample, const Vec3& n_near);

/// Cosine between the steer direction and the direction the tree entered
/// q_near with (q_near - parent). The root has no incoming direction and
/// returns +1 so the bend gate always passes there.
double compute_alignment(const Vec3& u_steer, const std::vector<TreeNode>& tree,
                         int near_id);

/// Signed concavity heuristic kappa = u_steer . (n_near x n_adj), where
/// n_adj is the normal of the face reached by walking off q_near's face
/// along u_steer. Open boundary: kappa = 0 (flat continuation) with a
/// one-time warning, adjacent_face = -1.
ConcavityResult check_concavity(const TriangleMesh& mesh,
                                const SurfacePoint& q_near, const Vec3& u_steer);

/// Wall-guided glide: project (q_near + step * u_steer) back to the
/// surface. Rejected (nullopt) when the projection correction exceeds
/// step, which signals a fold rather than a gentle wall.
std::optional<SurfacePoint> extend_glide(const TriangleMesh& mesh,
                                         const SurfacePoint& q_near,
                                         const Vec3& u_steer, double step);

struct LaunchResult {
  Vec3 tip;              // virtual catheter tip strictly inside the lumen
  SurfacePoint landing;  // first wall hit of the tip -> sample ray
  double advance;        // distance from q_near to tip along u_steer
};

/// Angled-catheter launch. Finds the catheter advance lambda in
/// (0, lambda_max] placing the tip at q_near + lambda * u_steer so that
/// the angle at the tip between (q_sample - tip) and (q_near - tip)
/// equals theta; the angle is strictly decreasing in lambda, so bisection
/// finds the unique root when one exists. Requires the tip to stay inside
/// the anatomy, then ray-casts tip -> q_sample for the landing. nullopt
/// when no advance satisfies the angle, the tip exits the lumen, or the
/// ray escapes without hitting a wall.
std::optional<LaunchResult> extend_launch(const TriangleMesh& mesh,
                                          const SurfacePoint& q_near,
                                          const Vec3& u_steer,
                                          const SurfacePoint& q_sample,
                                          double theta, double lambda_max);

/// Free-space rebound: first wall hit of the ray (q_near, u_steer), with
/// q_near's own face excluded. nullopt if the ray leaves an open boundary.
std::optional<SurfacePoint> extend_rebound(const TriangleMesh& mesh,
                                           const SurfacePoint& q_near,
                                           const Vec3& u_steer);

/// Grows the tree from q_init for at most config.max_iterations
/// iterations: sample -> nearest -> steer -> bend gate -> concavity
/// dispatch (kappa >= 0 glides along the wall; kappa < 0 tries the
/// angled-catheter launch and falls back to the rebound). Deterministic
/// given (mesh, q_init, config) — every iteration draws the same number
/// of random values whether or not it inserts a node.
PlanResult plan(const TriangleMesh& mesh, const SurfacePoint& q_init,
                const PlannerConfig& config, const PlanHooks& hooks = {});

/// Parent-chain walk from goal_node, reversed to root-first order.
std::vector<TreeNode> extract_path(const std::vector<TreeNode>& tree,
                                   int goal_node);

}  // namespace luminav
