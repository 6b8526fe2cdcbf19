#pragma once

// Scenario description for the simulator, loaded from JSON.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "superlimb/emg.hpp"
#include "superlimb/plant.hpp"
#include "superlimb/stability.hpp"
#include "superlimb/stiffness_control.hpp"

namespace superlimb {

enum class SimMode { InverseDynamics, Tracking };

/// Piecewise-linear schedule of (t, value) breakpoints, held constant outside.
struct Schedule {
  std::vector<std::pair<double, double>> points;

  double at(double t) const;
  double end_time() const { return points.empty() ? 0.0 : points.back().first; }
  bool empty() const { return points.empty(); }
};

struct PanelMotion {
  enum class Kind { Hold, Sweep };
  Kind kind = Kind::Hold;
  double amplitude = -0.05;  // m, signed vertical travel of each half cycle
  double speed = 0.02;       // m/s cruise speed
  double accel_time = 0.25;  // s to reach cruise speed
  double start = 0.5;        // s before the first ramp
  int cycles = 1;
  std::optional<double> z0;  // initial panel height, defaults to the tip height

  struct Sample {
    double z = 0.0, zdot = 0.0, zddot = 0.0;
  };
  /// Displacement from z0 at time t.
  Sample offset(double t) const;
  double cycle_duration() const;
};

struct HumanSway {
  double amplitude = 0.0;  // m (or rad) about the initial human joint position
  double frequency = 0.0;  // Hz
};

struct ControllerSpec {
  bool enabled = true;
  StiffnessTable table = default_stiffness_table(2);
  int level = 1;
  std::optional<Vector> x_eq;        // defaults to the initial tip position
  std::optional<Vector> f_gravity;   // defaults to (0, panel_mass * g)
  double panel_mass = 1.0;           // kg carried by the limb
  Matrix damping = Matrix::Zero(2, 2);
  bool gravity_compensation = true;
  double posture_stiffness = 2.0;    // N m/rad, null space of the task
  double posture_damping = 0.5;      // N m s/rad, null space of the task
  bool friction_enabled = false;
  FrictionModel friction = FrictionModel::coulomb_only(3, 0.5);
};

struct EmgSpec {
  std::optional<std::string> trace_path;  // recorded trace, `t,ch1[,...]`
  Schedule activation_profile;            // synthetic trace when no file is given
  double fs = 1000.0;
  std::optional<std::string> motion_path;  // `t,yaw_rad`
  Schedule yaw_profile;
  double motion_rate = 100.0;  // Hz, sampling of yaw_profile
  PipelineConfig pipeline;

  bool enabled() const { return trace_path.has_value() || !activation_profile.empty(); }
};

struct SimSpec {
  double dt = 1e-4;
  double duration = 1.0;
  SimMode mode = SimMode::InverseDynamics;
  std::uint64_t seed = 0;
  double baumgarte = 50.0;  // rad/s, constraint stabilization
};

struct Scenario {
  PlantModel plant;
  Vector q0;
  Vector qdot0;
  bool contact_enabled = true;
  ContactSpec contact;
  std::string task_link;  // support point link, tip used
  ControllerSpec controller;
  EmgSpec emg;
  PanelMotion panel;
  HumanSway sway;
  SimSpec sim;
  std::optional<ParametricSupport> stability;
};

/// Default scenario on the default plant: tip contact in z, controller at
/// level 1, no EMG, panel held, 1 s.
Scenario default_scenario();

/// Parses and validates. Relative file references resolve against base_dir
/// and must exist. Throws ParseError(key, reason) or MissingFile.
Scenario parse_scenario(const nlohmann::json& doc, const std::string& base_dir = ".");

Scenario load_scenario(const std::string& path);

/// Reads only the `stability` section of a config file.
ParametricSupport load_stability(const std::string& path);
/// Parses a `stability` object into a parametric support description.
ParametricSupport parse_stability(const nlohmann::json& doc, const std::string& key = "stability");

}  // namespace superlimb
