#pragma once

// Fixed-step simulation of the human + limb plant under task-space stiffness
// control, with optional sEMG-driven equilibrium shifts.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "superlimb/emg.hpp"
#include "superlimb/plant.hpp"
#include "superlimb/scenario.hpp"

namespace superlimb {

struct PlantState {
  Vector q;
  Vector qdot;
};

/// Bilateral constraints enforced by `integrate_step`: contact rows tracking
/// a target trajectory, prescribed (scripted) joints and locked joints.
struct ConstraintSet {
  std::optional<ContactSpec> contact;
  Vector contact_pos, contact_vel, contact_acc;  // targets, one entry per contact row
  std::vector<int> prescribed;
  Vector prescribed_pos, prescribed_vel, prescribed_acc;
  std::vector<int> locked;  // held at zero velocity
  double baumgarte = 50.0;  // rad/s

  Eigen::Index rows() const;
};

struct ConstrainedAcceleration {
  Vector qdd;
  Vector contact_force;     // lambda, acting on the plant
  Vector prescribed_force;  // generalized force keeping scripted joints on track
  Vector locked_force;      // torque holding locked joints
};

/// Solves A qdd + h = tau + C^T mu with the constraint accelerations.
/// Throws RankDeficient if the constraint rows are dependent.
ConstrainedAcceleration solve_constrained(const PlantModel& plant, const PlantState& state,
                                          const Vector& tau_total, const ConstraintSet& constraints);

struct StepResult {
  PlantState state;
  ConstrainedAcceleration solution;
};

/// Semi-implicit Euler: qdot += qdd dt, q += qdot dt, then qdot is projected
/// onto the constraint velocities at the new q. Throws NumericBlowup past 1e9
/// or on NaN.
StepResult integrate_step(const PlantState& state, const Vector& tau_total, const PlantModel& plant,
                          const ConstraintSet& constraints, double dt);

/// Band-limited (20-450 Hz) Gaussian noise modulated by the activation
/// profile. Scaled so that full activation yields a pipeline envelope close
/// to mvc_reference. Deterministic in the seed.
EmgTrace generate_emg(const Schedule& profile, double fs, std::uint64_t seed,
                      double mvc_reference = HillParams{}.mvc_reference, double f_lo = 20.0,
                      double f_hi = 450.0);

struct LogRecord {
  double t = 0.0;
  Vector q_s, qdot_s;
  Vector x;          // task position (x, z) of the support point
  Vector f_cmd;      // commanded task force
  Vector lambda;     // force delivered to the panel, one per contact direction
  Vector tau_s;      // commanded SRL torques, friction excluded
  double a = 0.0;    // muscle activation
  bool gate = false;
  Vector x_eq;
  Vector tau_h;      // generalized force the human joints must supply
  Vector lambda_decoupled;  // support force from the QR decoupling
  double panel_z = 0.0;
};

struct SimulationLog {
  std::vector<std::string> contact_names;
  std::vector<LogRecord> records;
  bool pulled = false;  // vertical support force went negative at some step
};

/// Runs the whole scenario. Errors are rethrown with the step index prepended.
SimulationLog run_scenario(const Scenario& scenario);

void write_log_csv(std::ostream& out, const SimulationLog& log);
void write_log_csv(const std::string& path, const SimulationLog& log);

/// Kinetic plus gravitational energy.
double total_energy(const PlantModel& plant, const PlantState& state);

}  // namespace superlimb
