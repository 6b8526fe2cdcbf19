#include "superlimb/simulator.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "superlimb/csv.hpp"
#include "superlimb/dynamics.hpp"
#include "superlimb/error.hpp"
#include "superlimb/log.hpp"
#include "superlimb/stiffness_control.hpp"

namespace superlimb {

Eigen::Index ConstraintSet::rows() const {
  const Eigen::Index k = contact ? static_cast<Eigen::Index>(contact->directions.size()) : 0;
  return k + static_cast<Eigen::Index>(prescribed.size() + locked.size());
}

namespace {

Matrix constraint_matrix(const PlantModel& plant, const Vector& q, const ConstraintSet& cs) {
  const Eigen::Index n = plant.dof();
  Matrix c = Matrix::Zero(cs.rows(), n);
  Eigen::Index row = 0;
  if (cs.contact) {
    const Matrix jc = contact_jacobian(plant, q, *cs.contact);
    c.topRows(jc.rows()) = jc;
    row = jc.rows();
  }
  for (int j : cs.prescribed) c(row++, j) = 1.0;
  for (int j : cs.locked) c(row++, j) = 1.0;
  return c;
}

Vector target_velocity(const ConstraintSet& cs) {
  Vector v = Vector::Zero(cs.rows());
  Eigen::Index row = 0;
  if (cs.contact) {
    v.head(cs.contact_vel.size()) = cs.contact_vel;
    row = cs.contact_vel.size();
  }
  v.segment(row, cs.prescribed_vel.size()) = cs.prescribed_vel;
  return v;
}

// Constraint violation at q against targets advanced by dt. Locked joints
// only constrain velocity, so their rows stay zero.
Vector position_error(const PlantModel& plant, const Vector& q, const ConstraintSet& cs, double dt) {
  Vector e = Vector::Zero(cs.rows());
  Eigen::Index row = 0;
  if (cs.contact) {
    const Eigen::Index k = cs.contact_pos.size();
    e.head(k) = contact_position(plant, q, *cs.contact) - (cs.contact_pos + cs.contact_vel * dt);
    row = k;
  }
  for (size_t i = 0; i < cs.prescribed.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    e(row++) = q(cs.prescribed[i]) - (cs.prescribed_pos(ii) + cs.prescribed_vel(ii) * dt);
  }
  return e;
}

void check_targets(const ConstraintSet& cs) {
  if (cs.contact) {
    const auto k = static_cast<Eigen::Index>(cs.contact->directions.size());
    if (cs.contact_pos.size() != k || cs.contact_vel.size() != k || cs.contact_acc.size() != k) {
      throw Error(ErrorCode::DimensionMismatch, "contact targets need one entry per direction");
    }
  }
  const auto p = static_cast<Eigen::Index>(cs.prescribed.size());
  if (cs.prescribed_pos.size() != p || cs.prescribed_vel.size() != p || cs.prescribed_acc.size() != p) {
    throw Error(ErrorCode::DimensionMismatch, "prescribed targets need one entry per joint");
  }
}

ConstrainedAcceleration solve_with(const PlantModel& plant, const PlantState& state,
                                   const PlantDynamics& dyn, const Vector& tau_total,
                                   const ConstraintSet& cs) {
  check_targets(cs);
  const Eigen::Index n = plant.dof();
  if (tau_total.size() != n) throw Error(ErrorCode::DimensionMismatch, "torque vector length");

  Eigen::LLT<Matrix> llt(dyn.a);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularWeight, "inertia matrix is not positive definite");
  const Vector free_qdd = llt.solve(tau_total - dyn.h_bias);

  ConstrainedAcceleration out;
  const Eigen::Index m = cs.rows();
  if (m == 0) {
    out.qdd = free_qdd;
    return out;
  }

  const Matrix c = constraint_matrix(plant, state.q, cs);
  const double w = cs.baumgarte;
  Vector rhs(m);
  Eigen::Index row = 0;
  if (cs.contact) {
    const Eigen::Index k = cs.contact_pos.size();
    const Vector pos = contact_position(plant, state.q, *cs.contact);
    const Vector vel = c.topRows(k) * state.qdot;
    const Vector bias = contact_bias(plant, state.q, state.qdot, *cs.contact);
    rhs.head(k) = cs.contact_acc - bias - 2.0 * w * (vel - cs.contact_vel) - w * w * (pos - cs.contact_pos);
    row = k;
  }
  for (size_t i = 0; i < cs.prescribed.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const int j = cs.prescribed[i];
    rhs(row++) = cs.prescribed_acc(ii) - 2.0 * w * (state.qdot(j) - cs.prescribed_vel(ii)) -
                 w * w * (state.q(j) - cs.prescribed_pos(ii));
  }
  for (size_t i = 0; i < cs.locked.size(); ++i) rhs(row++) = 0.0;

  const Matrix a_inv_ct = llt.solve(c.transpose());
  const Matrix gram = c * a_inv_ct;
  Eigen::LDLT<Matrix> ldlt(gram);
  const Vector d = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || d.minCoeff() <= 1e-12 * d.maxCoeff()) {
    throw Error(ErrorCode::RankDeficient, "constraint rows are linearly dependent");
  }
  const Vector mu = ldlt.solve(rhs - c * free_qdd);
  out.qdd = free_qdd + a_inv_ct * mu;

  row = 0;
  if (cs.contact) {
    out.contact_force = mu.head(cs.contact_pos.size());
    row = cs.contact_pos.size();
  }
  out.prescribed_force = mu.segment(row, static_cast<Eigen::Index>(cs.prescribed.size()));
  row += static_cast<Eigen::Index>(cs.prescribed.size());
  out.locked_force = mu.segment(row, static_cast<Eigen::Index>(cs.locked.size()));
  return out;
}

StepResult step_with(const PlantState& state, const Vector& tau_total, const PlantModel& plant,
                     const PlantDynamics& dyn, const ConstraintSet& cs, double dt) {
  StepResult out;
  out.solution = solve_with(plant, state, dyn, tau_total, cs);
  out.state.qdot = state.qdot + out.solution.qdd * dt;
  out.state.q = state.q + out.state.qdot * dt;
  if (cs.rows() > 0) {
    // Post-stabilization: one Newton step back onto the position constraints,
    // then an exact velocity projection at the corrected configuration.
    Matrix c = constraint_matrix(plant, out.state.q, cs);
    out.state.q -= dyn_consistent_pinv(c, dyn.a) * position_error(plant, out.state.q, cs, dt);
    c = constraint_matrix(plant, out.state.q, cs);
    out.state.qdot -= dyn_consistent_pinv(c, dyn.a) * (c * out.state.qdot - target_velocity(cs));
  }
  const double limit = 1e9;
  if (!out.state.q.allFinite() || !out.state.qdot.allFinite() ||
      out.state.q.cwiseAbs().maxCoeff() > limit || out.state.qdot.cwiseAbs().maxCoeff() > limit) {
    throw Error(ErrorCode::NumericBlowup, "plant state diverged");
  }
  return out;
}

}  // namespace

ConstrainedAcceleration solve_constrained(const PlantModel& plant, const PlantState& state,
                                          const Vector& tau_total, const ConstraintSet& constraints) {
  return solve_with(plant, state, plant_dynamics(plant, state.q, state.qdot), tau_total, constraints);
}

StepResult integrate_step(const PlantState& state, const Vector& tau_total, const PlantModel& plant,
                          const ConstraintSet& constraints, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::DimensionMismatch, "time step must be positive");
  return step_with(state, tau_total, plant, plant_dynamics(plant, state.q, state.qdot), constraints, dt);
}

double total_energy(const PlantModel& plant, const PlantState& state) {
  return kinetic_energy(plant, state.q, state.qdot) + potential_energy(plant, state.q);
}

EmgTrace generate_emg(const Schedule& profile, double fs, std::uint64_t seed, double mvc_reference,
                      double f_lo, double f_hi) {
  for (const auto& [t, a] : profile.points) {
    if (a < 0.0 || a > 1.0) throw Error(ErrorCode::BadModel, "activation profile must lie in [0, 1]");
  }
  const auto count = static_cast<size_t>(std::floor(profile.end_time() * fs + 1e-9)) + 1;

  // Box-Muller over mt19937_64 keeps traces identical across standard libraries.
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; };
  std::vector<double> white(count);
  for (size_t i = 0; i < count; i += 2) {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    white[i] = r * std::cos(phi);
    if (i + 1 < count) white[i + 1] = r * std::sin(phi);
  }

  std::vector<double> shaped = bandpass(white, f_lo, f_hi, fs);
  const std::vector<double> probe = bandpass(shaped, f_lo, f_hi, fs);
  double sum_sq = 0.0;
  for (double v : probe) sum_sq += v * v;
  const double rms = count > 0 ? std::sqrt(sum_sq / static_cast<double>(count)) : 0.0;
  const double scale = rms > 0.0 ? mvc_reference / rms : 0.0;

  for (size_t i = 0; i < count; ++i) {
    shaped[i] *= scale * profile.at(static_cast<double>(i) / fs);
  }
  EmgTrace trace;
  trace.fs = fs;
  trace.channels.push_back({"ch1", std::move(shaped)});
  return trace;
}

namespace {

struct EmgStream {
  std::vector<PipelineRow> rows;
  size_t index = 0;

  const PipelineRow* at(double t) {
    if (rows.empty() || t + 1e-12 < rows.front().t) return nullptr;
    while (index + 1 < rows.size() && rows[index + 1].t <= t + 1e-12) ++index;
    return &rows[index];
  }
};

EmgStream prepare_emg(const Scenario& s) {
  EmgStream stream;
  if (!s.emg.enabled()) return stream;
  const EmgSpec& spec = s.emg;

  EmgTrace trace;
  double t0 = 0.0;
  if (spec.trace_path) {
    trace = read_trace_csv(*spec.trace_path, &t0);
  } else {
    trace = generate_emg(spec.activation_profile, spec.fs, s.sim.seed, spec.pipeline.hill.mvc_reference,
                         spec.pipeline.f_lo, spec.pipeline.f_hi);
  }
  if (trace.channels.empty()) throw Error(ErrorCode::DimensionMismatch, "EMG trace has no channels");

  std::optional<std::vector<MotionSample>> motion;
  if (spec.motion_path) {
    motion = read_motion_csv(*spec.motion_path);
  } else if (!spec.yaw_profile.empty()) {
    const double t_end = std::max({spec.yaw_profile.end_time(), s.sim.duration,
                                   t0 + static_cast<double>(trace.length()) / trace.fs});
    const auto count = static_cast<size_t>(std::floor(t_end * spec.motion_rate + 1e-9)) + 1;
    motion.emplace();
    for (size_t i = 0; i < count; ++i) {
      const double t = static_cast<double>(i) / spec.motion_rate;
      motion->push_back({t, spec.yaw_profile.at(t)});
    }
  }
  stream.rows = run_pipeline(trace.channels.front().samples, trace.fs, t0, motion, spec.pipeline);
  return stream;
}

std::string direction_name(ContactDirection d) {
  switch (d) {
    case ContactDirection::X: return "x";
    case ContactDirection::Z: return "z";
    case ContactDirection::Rotation: return "rot";
  }
  return "?";
}

Eigen::Index matrix_rank(const Matrix& m) {
  if (m.rows() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  return (s.array() > 1e-9 * std::max(1.0, s(0))).count();
}

Vector gather(const Vector& v, const std::vector<int>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  return out;
}

class ScenarioRunner {
 public:
  explicit ScenarioRunner(const Scenario& s) : s_(s) {
    s_.plant.validate();
    n_ = s_.plant.dof();
    srl_ = s_.plant.srl_dofs();
    human_ = s_.plant.human_dofs();
    if (s_.q0.size() != n_ || s_.qdot0.size() != n_) {
      throw Error(ErrorCode::DimensionMismatch, "initial state does not match the plant");
    }
    task_link_ = s_.plant.link_index(s_.task_link);
    task_distance_ = s_.contact.distance < 0.0 ? s_.plant.links[static_cast<size_t>(task_link_)].length
                                               : s_.contact.distance;
    const ControllerSpec& c = s_.controller;
    if (c.friction_enabled) c.friction.validate(static_cast<Eigen::Index>(srl_.size()));

    state_ = {s_.q0, s_.qdot0};
    const PointKinematics tip0 = tip(state_);
    const Vector x_eq = c.x_eq ? *c.x_eq : Vector(tip0.position);
    const Vector f_g = c.f_gravity ? *c.f_gravity
                                   : (Vector(2) << 0.0, c.panel_mass * s_.plant.gravity).finished();
    ctrl_ = set_stiffness_level(TaskSpaceController::make(c.table[0], x_eq, f_g), c.level, c.table);
    ctrl_.damping = c.damping;
    x_eq0_ = ctrl_.x_eq;
    q_rest_ = gather(s_.q0, srl_);

    if (s_.contact_enabled) {
      contact_ = s_.contact;
      contact0_ = contact_position(s_.plant, s_.q0, *contact_);
      for (size_t r = 0; r < contact_->directions.size(); ++r) {
        if (contact_->directions[r] == ContactDirection::Z && s_.panel.z0) {
          contact0_(static_cast<Eigen::Index>(r)) = *s_.panel.z0;
        }
      }
    }
    emg_ = prepare_emg(s_);
  }

  SimulationLog run() {
    SimulationLog log;
    if (contact_) {
      for (auto d : contact_->directions) log.contact_names.push_back(direction_name(d));
    }
    const auto steps = static_cast<long long>(std::llround(s_.sim.duration / s_.sim.dt));
    log.records.reserve(static_cast<size_t>(std::max(0LL, steps)));
    prev_qdd_ = Vector::Zero(n_);
    for (long long i = 0; i < steps; ++i) {
      try {
        log.records.push_back(step(static_cast<double>(i) * s_.sim.dt, log));
      } catch (const Error& e) {
        throw Error(e.code(), "step " + std::to_string(i) + ": " + e.what());
      }
    }
    return log;
  }

 private:
  PointKinematics tip(const PlantState& st) const {
    return point_kinematics(s_.plant, st.q, st.qdot, task_link_, task_distance_);
  }

  LogRecord step(double t, SimulationLog& log) {
    const PlantDynamics dyn = plant_dynamics(s_.plant, state_.q, state_.qdot);
    const PointKinematics pk = tip(state_);
    const Vector x = pk.position;
    const Vector xdot = pk.jacobian * state_.qdot;

    LogRecord rec;
    rec.t = t;
    rec.q_s = gather(state_.q, srl_);
    rec.qdot_s = gather(state_.qdot, srl_);
    rec.x = x;

    // sEMG -> gate -> equilibrium shift
    TaskSpaceController ctrl = ctrl_;
    if (const PipelineRow* row = emg_.at(t)) {
      rec.a = row->activation;
      rec.gate = row->gate;
      ctrl.x_eq = x_eq0_ + Eigen::Vector2d(0.0, row->dxeq_m);
    }
    rec.x_eq = ctrl.x_eq;

    // task-space spring -> joint torques
    const auto ns = static_cast<Eigen::Index>(srl_.size());
    Matrix j_s(2, ns);
    for (Eigen::Index i = 0; i < ns; ++i) j_s.col(i) = pk.jacobian.col(srl_[static_cast<size_t>(i)]);
    Vector f = Vector::Zero(2);
    Vector tau_s = Vector::Zero(ns);
    if (s_.controller.enabled) {
      f = control_force(ctrl, x, xdot);
      tau_s = task_to_joint_torque(j_s, f);
      if (s_.controller.gravity_compensation) {
        tau_s += gather(gravity_torque(s_.plant, state_.q), srl_);
      }
      const Matrix null = Matrix::Identity(ns, ns) - j_s.transpose() * svd_pinv(j_s).transpose();
      tau_s += null * (-s_.controller.posture_stiffness * (rec.q_s - q_rest_) -
                       s_.controller.posture_damping * rec.qdot_s);
    }
    rec.f_cmd = f;
    rec.tau_s = tau_s;

    Vector tau_total = Vector::Zero(n_);
    for (Eigen::Index i = 0; i < ns; ++i) tau_total(srl_[static_cast<size_t>(i)]) = tau_s(i);

    ConstraintSet cs = constraints(t);
    if (s_.controller.enabled && s_.controller.friction_enabled) {
      apply_friction(dyn, tau_total, cs);
    }

    if (contact_) {
      DynamicsSnapshot snap{dyn.a, dyn.h_bias, contact_jacobian(s_.plant, state_.q, *contact_),
                            desired_qdd(cs)};
      rec.lambda_decoupled = -decouple(snap).lambda;
    }

    const StepResult res = step_with(state_, tau_total, s_.plant, dyn, cs, s_.sim.dt);
    rec.lambda = contact_ ? Vector(-res.solution.contact_force) : Vector();
    rec.tau_h = res.solution.prescribed_force;
    rec.panel_z = s_.panel.offset(t).z + panel_base();

    if (contact_ && !log.pulled) {
      for (size_t r = 0; r < contact_->directions.size(); ++r) {
        if (contact_->directions[r] == ContactDirection::Z && rec.lambda(static_cast<Eigen::Index>(r)) < 0.0) {
          log.pulled = true;
          log::warn("support force became negative (limb pulling on the panel) at t=" + std::to_string(t));
        }
      }
    }

    prev_qdd_ = res.solution.qdd;
    state_ = res.state;
    return rec;
  }

  double panel_base() const {
    if (!contact_) return s_.panel.z0.value_or(0.0);
    for (size_t r = 0; r < contact_->directions.size(); ++r) {
      if (contact_->directions[r] == ContactDirection::Z) return contact0_(static_cast<Eigen::Index>(r));
    }
    return s_.panel.z0.value_or(0.0);
  }

  ConstraintSet constraints(double t) const {
    ConstraintSet cs;
    cs.baumgarte = s_.sim.baumgarte;
    if (contact_) {
      cs.contact = contact_;
      const auto k = static_cast<Eigen::Index>(contact_->directions.size());
      cs.contact_pos = contact0_;
      cs.contact_vel = Vector::Zero(k);
      cs.contact_acc = Vector::Zero(k);
      const PanelMotion::Sample p = s_.panel.offset(t);
      for (Eigen::Index r = 0; r < k; ++r) {
        if (contact_->directions[static_cast<size_t>(r)] == ContactDirection::Z) {
          cs.contact_pos(r) += p.z;
          cs.contact_vel(r) = p.zdot;
          cs.contact_acc(r) = p.zddot;
        }
      }
    }
    cs.prescribed = human_;
    const auto nh = static_cast<Eigen::Index>(human_.size());
    cs.prescribed_pos.resize(nh);
    cs.prescribed_vel.resize(nh);
    cs.prescribed_acc.resize(nh);
    const double w = 2.0 * std::numbers::pi * s_.sway.frequency;
    for (Eigen::Index i = 0; i < nh; ++i) {
      const double base = s_.q0(human_[static_cast<size_t>(i)]);
      const double amp = s_.sway.amplitude;
      cs.prescribed_pos(i) = base + amp * std::sin(w * t);
      cs.prescribed_vel(i) = amp * w * std::cos(w * t);
      cs.prescribed_acc(i) = -amp * w * w * std::sin(w * t);
    }
    return cs;
  }

  Vector desired_qdd(const ConstraintSet& cs) const {
    if (s_.sim.mode == SimMode::Tracking) return prev_qdd_;
    Vector qdd = Vector::Zero(n_);
    for (size_t i = 0; i < cs.prescribed.size(); ++i) {
      qdd(cs.prescribed[i]) = cs.prescribed_acc(static_cast<Eigen::Index>(i));
    }
    return qdd;
  }

  // Stick-slip friction: joints slower than v_eps are first held by a
  // constraint; any whose holding torque exceeds the breakaway limit are
  // released and receive the saturated friction torque instead.
  void apply_friction(const PlantDynamics& dyn, Vector& tau_total, ConstraintSet& cs) const {
    const FrictionModel& fm = s_.controller.friction;
    const auto ns = static_cast<Eigen::Index>(srl_.size());
    const Vector qdot_s = gather(state_.qdot, srl_);

    std::vector<int> stuck;  // indices into srl_
    for (Eigen::Index i = 0; i < ns; ++i) {
      if (std::abs(qdot_s(i)) <= fm.v_eps && fm.coulomb(i) > 0.0) stuck.push_back(static_cast<int>(i));
    }

    Vector tau_applied = gather(tau_total, srl_);
    std::vector<int> held;
    std::vector<int> released;
    while (true) {
      held.clear();
      ConstraintSet trial = cs;
      for (int i : stuck) {
        trial.locked.push_back(srl_[static_cast<size_t>(i)]);
        if (matrix_rank(constraint_matrix(s_.plant, state_.q, trial)) < trial.rows()) {
          trial.locked.pop_back();
        } else {
          held.push_back(i);
        }
      }
      if (held.empty()) break;
      const ConstrainedAcceleration sol = solve_with(s_.plant, state_, dyn, tau_total, trial);
      std::vector<int> keep;
      bool changed = false;
      for (size_t j = 0; j < held.size(); ++j) {
        const int i = held[j];
        const double need = sol.locked_force(static_cast<Eigen::Index>(j));
        // the rest of the system pushes with -need; friction must cancel it
        tau_applied(i) = -need;
        if (std::abs(need) > fm.stiction_breakaway_ratio * fm.coulomb(i)) {
          released.push_back(i);
          changed = true;
        } else {
          keep.push_back(i);
        }
      }
      stuck = keep;
      if (!changed) {
        cs.locked = trial.locked;
        break;
      }
    }

    const Vector tau_f = friction_torque(fm, qdot_s, tau_applied);
    for (Eigen::Index i = 0; i < ns; ++i) {
      const bool is_held = std::find(held.begin(), held.end(), static_cast<int>(i)) != held.end() &&
                           std::find(cs.locked.begin(), cs.locked.end(), srl_[static_cast<size_t>(i)]) != cs.locked.end();
      if (!is_held) tau_total(srl_[static_cast<size_t>(i)]) += tau_f(i);
    }
  }

  const Scenario& s_;
  Eigen::Index n_ = 0;
  std::vector<int> srl_, human_;
  int task_link_ = 0;
  double task_distance_ = 0.0;
  PlantState state_;
  TaskSpaceController ctrl_;
  Vector x_eq0_;
  Vector q_rest_;
  std::optional<ContactSpec> contact_;
  Vector contact0_;
  EmgStream emg_;
  Vector prev_qdd_;
};

}  // namespace

SimulationLog run_scenario(const Scenario& scenario) { return ScenarioRunner(scenario).run(); }

void write_log_csv(std::ostream& out, const SimulationLog& log) {
  if (log.records.empty()) {
    csv::write_row(out, {"t"});
    return;
  }
  const LogRecord& first = log.records.front();
  std::vector<std::string> header{"t"};
  for (Eigen::Index i = 0; i < first.q_s.size(); ++i) header.push_back("q_s" + std::to_string(i + 1));
  for (Eigen::Index i = 0; i < first.qdot_s.size(); ++i) header.push_back("qdot_s" + std::to_string(i + 1));
  for (const char* h : {"x", "z", "f_cmd_x", "f_cmd_z"}) header.emplace_back(h);
  for (const auto& c : log.contact_names) header.push_back("lambda_" + c);
  for (Eigen::Index i = 0; i < first.tau_s.size(); ++i) header.push_back("tau_s" + std::to_string(i + 1));
  for (const char* h : {"a", "gate", "x_eq", "z_eq"}) header.emplace_back(h);
  for (Eigen::Index i = 0; i < first.tau_h.size(); ++i) header.push_back("tau_h" + std::to_string(i + 1));
  for (const auto& c : log.contact_names) header.push_back("lambda_qr_" + c);
  header.emplace_back("panel_z");
  csv::write_row(out, header);

  std::vector<std::string> row;
  auto push = [&row](const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(csv::format_number(v(i)));
  };
  for (const LogRecord& r : log.records) {
    row.clear();
    row.push_back(csv::format_number(r.t));
    push(r.q_s);
    push(r.qdot_s);
    push(r.x);
    push(r.f_cmd);
    push(r.lambda);
    push(r.tau_s);
    row.push_back(csv::format_number(r.a));
    row.emplace_back(r.gate ? "1" : "0");
    push(r.x_eq);
    push(r.tau_h);
    push(r.lambda_decoupled);
    row.push_back(csv::format_number(r.panel_z));
    csv::write_row(out, row);
  }
}

void write_log_csv(const std::string& path, const SimulationLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::MissingFile, "cannot write '" + path + "'");
  write_log_csv(out, log);
}

}  // namespace superlimb
