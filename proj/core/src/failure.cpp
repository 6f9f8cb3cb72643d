#include "luminav/failure.hpp"

#include <algorithm>
#include <cmath>

#include "luminav/log.hpp"

namespace luminav {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 1.5707963267948966;
}  // namespace

void FailureQuery::validate() const {
  if (!(branch_radius > 0.0)) throw ConfigError("branch_radius must be > 0");
  if (!(tip_length > 0.0)) throw ConfigError("tip_length must be > 0");
  if (!(takeoff_angle >= 0.0 && takeoff_angle <= kPi))
    throw ConfigError("takeoff_angle must be in [0, pi]");
  if (!std::isfinite(bend_angle)) throw ConfigError("bend_angle must be finite");
}

void ToolInventory::validate() const {
  if (tools.empty()) throw ConfigError("tool inventory is empty");
  for (const ToolSpec& t : tools) {
    if (!(t.bend_angle > 0.0 && t.bend_angle < kPi))
      throw ConfigError("tool '" + t.name + "' bend angle must be in (0, pi)");
    if (!(t.tip_length > 0.0))
      throw ConfigError("tool '" + t.name + "' tip length must be > 0");
  }
}

double lateral_deviation(const FailureQuery& q) {
  q.validate();
  const double mismatch = std::abs(q.takeoff_angle - q.bend_angle);
  if (mismatch > kHalfPi)
    log_warn_once("deviation-mismatch-over-90",
                  "angular mismatch exceeds 90 deg; the straight-tip "
                  "deviation model is dubious there");
  return q.tip_length * std::sin(mismatch);
}

bool launch_fails(const FailureQuery& q) {
  return q.branch_radius < lateral_deviation(q);
}

ToolSelection select_tool(const ToolInventory& inventory, double takeoff_angle,
                          double branch_radius) {
  inventory.validate();

  const ToolSpec* best = &inventory.tools.front();
  double best_mismatch = std::abs(takeoff_angle - best->bend_angle);
  for (size_t i = 1; i < inventory.tools.size(); ++i) {
    const ToolSpec& t = inventory.tools[i];
    const double mismatch = std::abs(takeoff_angle - t.bend_angle);
    const bool better =
        mismatch < best_mismatch ||
        (mismatch == best_mismatch &&
         (t.tip_length < best->tip_length ||
          (t.tip_length == best->tip_length && t.name < best->name)));
    if (better) {
      best = &t;
      best_mismatch = mismatch;
    }
  }

  FailureQuery q;
  q.branch_radius = branch_radius;
  q.tip_length = best->tip_length;
  q.takeoff_angle = takeoff_angle;
  q.bend_angle = best->bend_angle;

  ToolSelection sel;
  sel.tool = *best;
  sel.predicted_deviation = lateral_deviation(q);
  sel.feasible = !launch_fails(q);
  return sel;
}

}  // namespace luminav
