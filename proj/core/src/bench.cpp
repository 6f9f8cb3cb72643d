#include "luminav/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "luminav/queries.hpp"
#include "luminav/random.hpp"
#include "luminav/stats.hpp"

namespace luminav {

namespace {

constexpr double kTwoPi = 6.283185307179586;

// Substream tag separating the entry-point draw from the planner's own
// stream, so both depend only on the trial seed.
constexpr std::uint64_t kEntryStreamTag = 0x9e3779b97f4a7c15ull;

// Any unit vector not parallel to `axis`, used to seed the disk basis.
Vec3 off_axis_helper(const Vec3& axis) {
  const Vec3 a = axis.cwiseAbs();
  if (a.x() <= a.y() && a.x() <= a.z()) return Vec3::UnitX();
  if (a.y() <= a.z()) return Vec3::UnitY();
  return Vec3::UnitZ();
}

Vec3 sample_disk_point(const InletDisk& disk, const Vec3& axis,
                       RandomStream& rng) {
  const Vec3 e1 = axis.cross(off_axis_helper(axis)).normalized();
  const Vec3 e2 = axis.cross(e1);
  const double r = disk.radius * std::sqrt(rng.uniform());
  const double phi = kTwoPi * rng.uniform();
  return disk.center + r * (std::cos(phi) * e1 + std::sin(phi) * e2);
}

}  // namespace

void InletDisk::validate() const {
  if (!(radius > 0.0)) throw ConfigError("inlet disk radius must be > 0");
  if (axis.norm() < kDegenerateLength)
    throw ConfigError("inlet disk axis is degenerate");
}

std::vector<TrialReport> run_trials(const TriangleMesh& mesh,
                                    const InletDisk& entry_sampler,
                                    const PlannerConfig& config, int n_trials,
                                    const TrialOptions& options) {
  if (n_trials <= 0) throw ConfigError("n_trials must be > 0");
  entry_sampler.validate();
  config.validate();
  const Vec3 axis = entry_sampler.axis.normalized();

  std::vector<TrialReport> reports(n_trials);

  const auto run_one = [&](int i) {
    TrialReport& report = reports[i];
    report.seed = config.seed + static_cast<std::uint64_t>(i);
    report.target = options.target_label;

    RandomStream entry_rng(mix_seed(report.seed, kEntryStreamTag));
    const Vec3 entry = sample_disk_point(entry_sampler, axis, entry_rng);
    report.start = resolve_start(mesh, entry, axis);
    if (!report.start) return;  // no wall along the axis: unresolved trial

    PlannerConfig trial_config = config;
    trial_config.seed = report.seed;
    const PlanResult result = plan(mesh, *report.start, trial_config);
    report.status = result.status;
    if (result.status == PlanStatus::reached)
      report.iterations_to_success = result.first_goal_iteration;
    report.per_iteration_seconds =
        result.wall_time_seconds / std::max(1, result.iterations_used);
  };

  int workers = options.workers > 0
                    ? options.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, n_trials));

  if (workers == 1) {
    for (int i = 0; i < n_trials; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n_trials; i = next.fetch_add(1)) {
          try {
            run_one(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  return reports;  // index order == seed order
}

std::pair<double, double> wilson_interval(int successes, int n,
                                          double confidence) {
  if (n <= 0) throw ConfigError("wilson_interval needs n > 0");
  if (successes < 0 || successes > n)
    throw ConfigError("wilson_interval needs 0 <= successes <= n");
  const double z = confidence_z(confidence);
  const double z2 = z * z;
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  double low = std::max(0.0, center - half);
  double high = std::min(1.0, center + half);
  // The closed-form ends are exact at the boundary counts; pin them so
  // rounding noise cannot produce a spurious open interval there.
  if (successes == 0) low = 0.0;
  if (successes == n) high = 1.0;
  return {low, high};
}

SuccessCurve success_curve(const std::vector<TrialReport>& reports,
                           const std::vector<int>& grid, double confidence,
                           bool exclude_unresolved) {
  for (size_t k = 1; k < grid.size(); ++k)
    if (grid[k] <= grid[k - 1])
      throw ConfigError("iteration grid must be strictly increasing");

  int denominator = 0;
  for (const TrialReport& r : reports)
    if (!exclude_unresolved || r.start_resolved()) ++denominator;
  if (denominator == 0) throw ConfigError("no trials in the denominator");

  SuccessCurve curve;
  curve.grid = grid;
  curve.fraction.reserve(grid.size());
  curve.wilson_low.reserve(grid.size());
  curve.wilson_high.reserve(grid.size());
  for (int budget : grid) {
    int successes = 0;
    for (const TrialReport& r : reports) {
      if (exclude_unresolved && !r.start_resolved()) continue;
      if (r.iterations_to_success && *r.iterations_to_success <= budget)
        ++successes;
    }
    const auto [low, high] = wilson_interval(successes, denominator, confidence);
    curve.fraction.push_back(static_cast<double>(successes) / denominator);
    curve.wilson_low.push_back(low);
    curve.wilson_high.push_back(high);
  }
  return curve;
}

std::vector<int> default_iteration_grid() {
  std::vector<int> grid;
  for (int k = 1000; k <= 60000; k += 1000) grid.push_back(k);
  return grid;
}

std::vector<TimingRow> timing_profile(const TriangleMesh& mesh,
                                      const SurfacePoint& start,
                                      const PlannerConfig& config,
                                      const std::vector<int>& checkpoints) {
  if (checkpoints.empty()) throw ConfigError("timing needs checkpoints");
  for (size_t k = 0; k < checkpoints.size(); ++k)
    if (checkpoints[k] <= (k ? checkpoints[k - 1] : 0))
      throw ConfigError("checkpoints must be positive and increasing");

  PlannerConfig run_config = config;
  run_config.max_iterations = checkpoints.back();

  std::vector<TimingRow> rows;
  rows.reserve(checkpoints.size());
  size_t next_checkpoint = 0;

  const auto t0 = std::chrono::steady_clock::now();
  PlanHooks hooks;
  hooks.stop_at_goal = false;  // the profile needs the full budget
  hooks.on_iteration = [&](int iteration, int tree_size) {
    if (next_checkpoint < checkpoints.size() &&
        iteration == checkpoints[next_checkpoint]) {
      const double elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
      rows.push_back(TimingRow{iteration, elapsed, elapsed / iteration,
                               tree_size});
      ++next_checkpoint;
    }
  };
  plan(mesh, start, run_config, hooks);
  return rows;
}

}  // namespace luminav
