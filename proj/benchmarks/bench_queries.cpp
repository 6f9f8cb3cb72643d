// Microbenchmarks for the geometry kernel and the planner loop, run over
// the bundled Y-bifurcation fixture (~10k faces). Linear-scan and
// BVH-accelerated variants are measured side by side.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "luminav/mesh.hpp"
#include "luminav/mesh_io.hpp"
#include "luminav/planner.hpp"
#include "luminav/queries.hpp"
#include "luminav/types.hpp"

#ifndef LUMINAV_ASSET_DIR
#error "LUMINAV_ASSET_DIR must point at the mesh fixture directory"
#endif

namespace {

using namespace luminav;

const TriangleMesh& linear_mesh() {
  static const TriangleMesh mesh = [] {
    return load_mesh(std::string(LUMINAV_ASSET_DIR) + "/bifurcation.stl",
                     MeshFormat::auto_detect, 1.0);
  }();
  return mesh;
}

const TriangleMesh& bvh_mesh() {
  static const TriangleMesh mesh = [] {
    TriangleMesh m =
        load_mesh(std::string(LUMINAV_ASSET_DIR) + "/bifurcation.stl",
                  MeshFormat::auto_detect, 1.0);
    m.build_bvh();
    return m;
  }();
  return mesh;
}

// Pre-generated query load: ray origins on the trunk axis (guaranteed
// interior), directions uniform on the sphere, probe points in the bounds.
struct QueryLoad {
  std::vector<Ray> rays;
  std::vector<Vec3> points;
};

const QueryLoad& query_load() {
  static const QueryLoad load = [] {
    QueryLoad q;
    std::mt19937_64 gen(2026);
    std::uniform_real_distribution<double> along(4.0, 18.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> box(-6.0, 6.0);
    for (int i = 0; i < 1024; ++i) {
      Ray ray;
      ray.origin = Vec3(0, 0, along(gen));
      ray.direction =
          Vec3(normal(gen), normal(gen), normal(gen)).normalized();
      q.rays.push_back(ray);
      q.points.push_back(Vec3(box(gen), box(gen), along(gen) + box(gen)));
    }
    return q;
  }();
  return load;
}

void BM_RayCast(benchmark::State& state, const TriangleMesh& mesh) {
  const auto& rays = query_load().rays;
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ray_intersect(mesh, rays[i]));
    i = (i + 1) % rays.size();
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_Project(benchmark::State& state, const TriangleMesh& mesh) {
  const auto& points = query_load().points;
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_to_closest_surface(mesh, points[i]));
    i = (i + 1) % points.size();
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_WindingNumber(benchmark::State& state) {
  const TriangleMesh& mesh = linear_mesh();
  const auto& points = query_load().points;
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(winding_number(mesh, points[i]));
    i = (i + 1) % points.size();
  }
  state.SetItemsProcessed(state.iterations());
}

// Full planner iterations (sample -> nearest -> gate -> extend), run with
// the goal check disabled so every iteration costs the same regardless of
// when the branch would be reached.
void BM_PlannerIterations(benchmark::State& state, const TriangleMesh& mesh) {
  const int budget = static_cast<int>(state.range(0));
  PlannerConfig config;
  config.max_iterations = budget;
  config.seed = 11;
  const auto start = resolve_start(mesh, Vec3(0, 0, 4), Vec3(0, 0, 1));
  if (!start) {
    state.SkipWithError("planner start did not resolve");
    return;
  }
  PlanHooks hooks;
  hooks.stop_at_goal = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan(mesh, *start, config, hooks));
  }
  state.SetItemsProcessed(state.iterations() * budget);
}

}  // namespace

BENCHMARK_CAPTURE(BM_RayCast, linear, linear_mesh());
BENCHMARK_CAPTURE(BM_RayCast, bvh, bvh_mesh());
BENCHMARK_CAPTURE(BM_Project, linear, linear_mesh());
BENCHMARK_CAPTURE(BM_Project, bvh, bvh_mesh());
BENCHMARK(BM_WindingNumber);
BENCHMARK_CAPTURE(BM_PlannerIterations, linear, linear_mesh())
    ->Arg(1000)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_PlannerIterations, bvh, bvh_mesh())
    ->Arg(1000)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
