#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <stdexcept>
#include <string>

namespace luminav {

using Vec3 = Eigen::Vector3d;

/// Geometric tolerances shared across the library. All linear quantities
/// are millimeters.
inline constexpr double kEpsPlane = 1e-6;          // on-surface tolerance
inline constexpr double kBaryEps = 1e-9;           // barycentric slack for containment
inline constexpr double kWeldTol = 1e-6;           // vertex weld distance at load
inline constexpr double kMinRayT = 10.0 * kEpsPlane;  // self-hit exclusion for wall casts
inline constexpr double kDegenerateLength = 1e-9;  // below this, a direction is undefined

class MeshLoadError : public std::runtime_error {
 public:
  explicit MeshLoadError(const std::string& what) : std::runtime_error(what) {}
};

class TopologyError : public std::runtime_error {
 public:
  explicit TopologyError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

class KinematicsError : public std::runtime_error {
 public:
  KinematicsError(const std::string& what, int node_id)
      : std::runtime_error(what), node_id(node_id) {}
  int node_id;
};

}  // namespace luminav
