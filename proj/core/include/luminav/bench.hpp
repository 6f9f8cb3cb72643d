#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "luminav/mesh.hpp"
#include "luminav/planner.hpp"
#include "luminav/types.hpp"

namespace luminav {

/// Entry distribution for trial starts: points drawn uniformly over a disk,
/// then pushed along `axis` to the first wall contact.
struct InletDisk {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
  Vec3 axis = Vec3::UnitZ();  // normalized at use

  void validate() const;  // throws ConfigError
};

struct TrialReport {
  std::uint64_t seed = 0;
  std::optional<SurfacePoint> start;  // nullopt if the entry never met a wall
  std::string target;
  PlanStatus status = PlanStatus::budget_exhausted;
  std::optional<int> iterations_to_success;  // present iff status == reached
  double per_iteration_seconds = 0.0;  // measured; not part of deterministic output

  bool start_resolved() const { return start.has_value(); }
};

struct TrialOptions {
  int workers = 0;  // 0 = one per hardware thread, capped by trial count
  std::string target_label = "goal";
};

/// Runs n_trials independent seeded plans. Trial i plans with seed
/// config.seed + i and draws its entry point from the inlet disk using a
/// stream derived from that seed, so reports depend only on (mesh, inlet,
/// config, i) — never on worker scheduling. Reports come back in seed
/// order. Trials whose entry axis never meets a wall are reported
/// unresolved with no plan run.
std::vector<TrialReport> run_trials(const TriangleMesh& mesh,
                                    const InletDisk& entry_sampler,
                                    const PlannerConfig& config, int n_trials,
                                    const TrialOptions& options = {});

/// Wilson score interval for a binomial proportion. Exact 0 and n keep
/// their closed-form bound ends (low = 0, high = 1 respectively).
std::pair<double, double> wilson_interval(int successes, int n,
                                          double confidence);

struct SuccessCurve {
  std::vector<int> grid;  // iteration budgets, strictly increasing
  std::vector<double> fraction;
  std::vector<double> wilson_low;
  std::vector<double> wilson_high;
};

/// Fraction of trials that had succeeded by each iteration budget, with
/// Wilson bands. With exclude_unresolved, trials that never got a start
/// point drop out of the denominator instead of counting as failures.
SuccessCurve success_curve(const std::vector<TrialReport>& reports,
                           const std::vector<int>& grid,
                           double confidence = 0.95,
                           bool exclude_unresolved = false);

/// Every 1000 iterations up to 60000 — the grid the success studies use.
std::vector<int> default_iteration_grid();

struct TimingRow {
  int iterations = 0;
  double cumulative_seconds = 0.0;
  double mean_per_iteration_seconds = 0.0;
  int tree_size = 0;
};

/// Wall-clock profile of a single dedicated run that ignores the goal and
/// runs through the last checkpoint. Cumulative time covers the iteration
/// loop only (no mesh load, no serialization).
std::vector<TimingRow> timing_profile(const TriangleMesh& mesh,
                                      const SurfacePoint& start,
                                      const PlannerConfig& config,
                                      const std::vector<int>& checkpoints);

}  // namespace luminav
