#include "luminav/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "luminav/log.hpp"
#include "luminav/queries.hpp"
#include "luminav/random.hpp"

namespace luminav {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Residual gate for the launch bisection. The tip-angle function is
// continuous except when q_sample lies exactly on the scan segment, where
// it jumps from pi to 0; a converged bracket with a large residual means
// we landed on that jump, not on a root.
constexpr double kLaunchAngleTol = 1e-9;

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

void PlannerConfig::validate() const {
  if (!(step_size > 0.0)) throw ConfigError("step_size must be > 0");
  if (max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
  if (!(bend_threshold >= -1.0 && bend_threshold <= 1.0))
    throw ConfigError("bend_threshold must be a cosine in [-1, 1]");
  if (!(catheter_angle > 0.0 && catheter_angle < kPi))
    throw ConfigError("catheter_angle must be in (0, pi) radians");
  if (!(tip_scan_max > 0.0)) throw ConfigError("tip_scan_max must be > 0");
  if (catheter_angle < kPi / 6.0 || catheter_angle > kPi / 2.0)
    log_warn_once("catheter-angle-domain",
                  "catheter_angle outside the usual [30 deg, 90 deg] range");
}

const char* primitive_name(Primitive p) {
  switch (p) {
    case Primitive::root: return "root";
    case Primitive::glide: return "glide";
    case Primitive::rebound: return "rebound";
    case Primitive::launch: return "launch";
  }
  return "root";
}

Primitive parse_primitive(const std::string& name) {
  if (name == "root") return Primitive::root;
  if (name == "glide") return Primitive::glide;
  if (name == "rebound") return Primitive::rebound;
  if (name == "launch") return Primitive::launch;
  throw ConfigError("unknown primitive '" + name + "'");
}

int find_nearest_node(const std::vector<TreeNode>& tree,
                      const SurfacePoint& q_sample) {
  int best = 0;
  double best_d2 = (tree[0].point.position - q_sample.position).squaredNorm();
  for (int i = 1; i < static_cast<int>(tree.size()); ++i) {
    const double d2 = (tree[i].point.position - q_sample.position).squaredNorm();
    if (d2 < best_d2) {  // strict: ties keep the lowest id
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

Vec3 compute_steer_vector(const SurfacePoint& q_near,
                          const SurfacePoint& q_sample, const Vec3& n_near) {
  const Vec3 d = q_sample.position - q_near.position;
  return d - d.dot(n_near) * n_near;
}

double compute_alignment(const Vec3& u_steer, const std::vector<TreeNode>& tree,
                         int near_id) {
  const TreeNode& node = tree[near_id];
  if (node.parent < 0) return 1.0;
  const Vec3 incoming = node.point.position - tree[node.parent].point.position;
  const double len = incoming.norm();
  if (len < kDegenerateLength) return 1.0;
  return u_steer.normalized().dot(incoming / len);
}

ConcavityResult check_concavity(const TriangleMesh& mesh,
                                const SurfacePoint& q_near,
                                const Vec3& u_steer) {
  ConcavityResult result;
  const auto adj = adjacent_face_in_direction(mesh, q_near, u_steer);
  if (!adj) {
    log_warn_once("concavity-open-boundary",
                  "steer direction leaves an open boundary; treating the "
                  "continuation as flat (kappa = 0)");
    return result;  // kappa 0, adjacent_face -1
  }
  result.adjacent_face = *adj;
  const Vec3& n_near = mesh.face_normal(q_near.face_id);
  const Vec3& n_adj = mesh.face_normal(*adj);
  result.kappa = u_steer.dot(n_near.cross(n_adj));
  return result;
}

std::optional<SurfacePoint> extend_glide(const TriangleMesh& mesh,
                                         const SurfacePoint& q_near,
                                         const Vec3& u_steer, double step) {
  const Vec3 target = q_near.position + step * u_steer;
  const SurfacePoint q_new = project_to_closest_surface(mesh, target);
  // A correction larger than the step itself means the wall folded away
  // from under the target; gliding there would not model wall contact.
  if ((q_new.position - target).norm() > step) return std::nullopt;
  return q_new;
}

std::optional<LaunchResult> extend_launch(const TriangleMesh& mesh,
                                          const SurfacePoint& q_near,
                                          const Vec3& u_steer,
                                          const SurfacePoint& q_sample,
                                          double theta, double lambda_max) {
  const auto tip_angle = [&](double lambda) {
    const Vec3 tip = q_near.position + lambda * u_steer;
    return angle_between(q_near.position - tip, q_sample.position - tip);
  };

  // The angle at the tip decreases strictly from its value at the smallest
  // admissible advance toward 0 as the tip overtakes the sample, so a sign
  // change over the scan interval brackets the unique root.
  double lo = kMinRayT;
  double hi = lambda_max;
  if (tip_angle(lo) - theta < 0.0) return std::nullopt;
  if (tip_angle(hi) - theta > 0.0) return std::nullopt;
  for (int i = 0; i < 128; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (tip_angle(mid) - theta >= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  if (std::abs(tip_angle(lambda) - theta) > kLaunchAngleTol)
    return std::nullopt;  // converged onto the collinear jump, not a root

  const Vec3 tip = q_near.position + lambda * u_steer;
  if (!inside_anatomy(mesh, tip)) return std::nullopt;

  const Vec3 s = q_sample.position - tip;
  const double s_len = s.norm();
  if (s_len < kDegenerateLength) return std::nullopt;
  const auto hit = ray_intersect(mesh, Ray{tip, Vec3(s / s_len)},
                                 /*exclude_face=*/-1, kMinRayT);
  if (!hit) return std::nullopt;
  return LaunchResult{tip, hit->point, lambda};
}

std::optional<SurfacePoint> extend_rebound(const TriangleMesh& mesh,
                                           const SurfacePoint& q_near,
                                           const Vec3& u_steer) {
  const auto hit = ray_intersect(mesh, Ray{q_near.position, u_steer},
                                 q_near.face_id, kMinRayT);
  if (!hit) return std::nullopt;
  return hit->point;
}

PlanResult plan(const TriangleMesh& mesh, const SurfacePoint& q_init,
                const PlannerConfig& config, const PlanHooks& hooks) {
  config.validate();
  if (q_init.face_id < 0 || q_init.face_id >= mesh.num_faces())
    throw ConfigError("start point does not reference a mesh face");

  PlanResult result;
  std::vector<TreeNode>& tree = result.tree;
  tree.push_back(TreeNode{q_init, -1, Primitive::root, std::nullopt,
                          Vec3::Zero()});

  if (config.goal.contains(q_init.face_id)) {
    result.goal_node = 0;
    result.first_goal_iteration = 0;
    if (hooks.stop_at_goal) {
      result.status = PlanStatus::reached;
      result.path = extract_path(tree, 0);
      result.tree_size = 1;
      return result;
    }
  }

  RandomStream rng(config.seed);
  const auto t_start = std::chrono::steady_clock::now();

  int iterations = 0;
  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    iterations = iter;
    const SurfacePoint q_sample = sample_point_on_anatomy(mesh, rng);
    const int near_id = find_nearest_node(tree, q_sample);
    const TreeNode& near = tree[near_id];

    std::optional<TreeNode> candidate;
    do {
      if ((q_sample.position - near.point.position).norm() < kDegenerateLength)
        break;  // sampled the tree itself; no direction to steer in

      const Vec3& n_near = mesh.face_normal(near.point.face_id);
      const Vec3 u_raw = compute_steer_vector(near.point, q_sample, n_near);
      if (u_raw.norm() < kDegenerateLength) break;  // steer along the normal
      const Vec3 u_steer = u_raw.normalized();

      if (compute_alignment(u_steer, tree, near_id) < config.bend_threshold)
        break;  // would bend the wire past its flexibility

      const ConcavityResult cc = check_concavity(mesh, near.point, u_steer);
      if (cc.kappa >= 0.0) {
        // Locally concave (or flat): the wall holds the wire; glide on it.
        const auto q_new =
            extend_glide(mesh, near.point, u_steer, config.step_size);
        if (q_new &&
            (q_new->position - near.point.position).norm() >= kDegenerateLength)
          candidate = TreeNode{*q_new, near_id, Primitive::glide, std::nullopt,
                               u_steer};
      } else {
        // Locally convex: the wall falls away. Prefer the angled-catheter
        // launch; when it has no valid tip or landing, let the wire fly
        // free and rebound off the far wall.
        const auto launch =
            extend_launch(mesh, near.point, u_steer, q_sample,
                          config.catheter_angle, config.tip_scan_max);
        if (launch && (launch->landing.position - near.point.position).norm() >=
                          kDegenerateLength) {
          candidate = TreeNode{launch->landing, near_id, Primitive::launch,
                               launch->tip, u_steer};
        } else {
          const auto q_new = extend_rebound(mesh, near.point, u_steer);
          if (q_new && (q_new->position - near.point.position).norm() >=
                           kDegenerateLength)
            candidate = TreeNode{*q_new, near_id, Primitive::rebound,
                                 std::nullopt, u_steer};
        }
      }
    } while (false);

    bool reached_now = false;
    if (candidate) {
      tree.push_back(*candidate);
      if (result.goal_node < 0 &&
          config.goal.contains(candidate->point.face_id)) {
        result.goal_node = static_cast<int>(tree.size()) - 1;
        result.first_goal_iteration = iter;
        reached_now = true;
      }
    }
    if (hooks.on_iteration)
      hooks.on_iteration(iter, static_cast<int>(tree.size()));
    if (reached_now && hooks.stop_at_goal) break;
  }

  const auto t_end = std::chrono::steady_clock::now();
  result.wall_time_seconds =
      std::chrono::duration<double>(t_end - t_start).count();
  result.iterations_used = iterations;
  result.tree_size = static_cast<int>(tree.size());
  if (result.goal_node >= 0) {
    result.status = PlanStatus::reached;
    result.path = extract_path(tree, result.goal_node);
  } else {
    result.status = PlanStatus::budget_exhausted;
  }
  return result;
}

std::vector<TreeNode> extract_path(const std::vector<TreeNode>& tree,
                                   int goal_node) {
  std::vector<TreeNode> path;
  for (int id = goal_node; id >= 0; id = tree[id].parent)
    path.push_back(tree[id]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace luminav
