#include "superlimb/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "superlimb/error.hpp"

namespace superlimb {

using nlohmann::json;

double Schedule::at(double t) const {
  if (points.empty()) return 0.0;
  if (t <= points.front().first) return points.front().second;
  if (t >= points.back().first) return points.back().second;
  const auto upper = std::upper_bound(points.begin(), points.end(), t,
                                      [](double value, const auto& p) { return value < p.first; });
  const auto& [t1, v1] = *upper;
  const auto& [t0, v0] = *(upper - 1);
  if (t1 <= t0) return v1;
  return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

namespace {

struct Leg {
  double distance;  // signed
  double accel;
  double peak;      // peak speed
  double ramp;      // acceleration phase duration
  double duration;
};

Leg make_leg(double distance, double speed, double accel_time) {
  const double d = std::abs(distance);
  Leg leg{distance, speed / accel_time, speed, accel_time, 0.0};
  if (d < speed * accel_time) {
    leg.peak = std::sqrt(d * leg.accel);
    leg.ramp = leg.peak / leg.accel;
  }
  leg.duration = leg.peak > 0.0 ? 2.0 * leg.ramp + (d - leg.peak * leg.ramp) / leg.peak : 0.0;
  return leg;
}

PanelMotion::Sample leg_sample(const Leg& leg, double tau) {
  const double sign = leg.distance < 0.0 ? -1.0 : 1.0;
  const double d = std::abs(leg.distance);
  PanelMotion::Sample s;
  if (tau <= 0.0) return s;
  if (tau >= leg.duration) {
    s.z = leg.distance;
    return s;
  }
  if (tau < leg.ramp) {
    s = {0.5 * leg.accel * tau * tau, leg.accel * tau, leg.accel};
  } else if (tau <= leg.duration - leg.ramp) {
    s = {0.5 * leg.accel * leg.ramp * leg.ramp + leg.peak * (tau - leg.ramp), leg.peak, 0.0};
  } else {
    const double rem = leg.duration - tau;
    s = {d - 0.5 * leg.accel * rem * rem, leg.accel * rem, -leg.accel};
  }
  s.z *= sign;
  s.zdot *= sign;
  s.zddot *= sign;
  return s;
}

}  // namespace

double PanelMotion::cycle_duration() const {
  return 2.0 * make_leg(amplitude, speed, accel_time).duration;
}

PanelMotion::Sample PanelMotion::offset(double t) const {
  if (kind == Kind::Hold || t <= start || amplitude == 0.0) return {};
  const Leg up = make_leg(amplitude, speed, accel_time);
  const double cycle = 2.0 * up.duration;
  double tau = t - start;
  if (tau >= cycle * cycles) return {};
  tau = std::fmod(tau, cycle);
  if (tau < up.duration) return leg_sample(up, tau);
  Sample s = leg_sample(make_leg(-amplitude, speed, accel_time), tau - up.duration);
  s.z += amplitude;
  return s;
}

Scenario default_scenario() {
  Scenario s;
  s.plant = default_plant();
  s.q0 = (Vector(4) << 0.0, 1.2, -0.9, -0.3).finished();
  s.qdot0 = Vector::Zero(4);
  s.contact.link = "wrist";
  s.contact.directions = {ContactDirection::Z};
  s.task_link = "wrist";
  return s;
}

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const json* child(const json& obj, const char* key) {
  if (!obj.is_object()) return nullptr;
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ParseError(key, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(key, "must be finite");
  return d;
}

double number_or(const json& obj, const char* name, const std::string& prefix, double fallback) {
  const json* v = child(obj, name);
  return v ? get_number(*v, join(prefix, name)) : fallback;
}

bool bool_or(const json& obj, const char* name, const std::string& prefix, bool fallback) {
  const json* v = child(obj, name);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ParseError(join(prefix, name), "must be true or false");
  return v->get<bool>();
}

std::string string_or(const json& obj, const char* name, const std::string& prefix,
                      const std::string& fallback) {
  const json* v = child(obj, name);
  if (!v) return fallback;
  if (!v->is_string()) throw ParseError(join(prefix, name), "must be a string");
  return v->get<std::string>();
}

Vector get_vector(const json& v, const std::string& key, Eigen::Index expected = -1) {
  if (!v.is_array()) throw ParseError(key, "must be an array of numbers");
  if (expected >= 0 && static_cast<Eigen::Index>(v.size()) != expected) {
    throw ParseError(key, "must have " + std::to_string(expected) + " entries");
  }
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = get_number(v[i], key + "[" + std::to_string(i) + "]");
  }
  return out;
}

// Scalar -> scalar * I, flat list -> diagonal, nested list -> full matrix.
Matrix get_matrix(const json& v, const std::string& key, Eigen::Index dim) {
  if (v.is_number()) return get_number(v, key) * Matrix::Identity(dim, dim);
  if (!v.is_array()) throw ParseError(key, "must be a number, a diagonal or a matrix");
  if (!v.empty() && v[0].is_array()) {
    if (static_cast<Eigen::Index>(v.size()) != dim) {
      throw ParseError(key, "must have " + std::to_string(dim) + " rows");
    }
    Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      m.row(r) = get_vector(v[static_cast<size_t>(r)], key + "[" + std::to_string(r) + "]", dim).transpose();
    }
    return m;
  }
  if (v.size() == 1) return get_number(v[0], key + "[0]") * Matrix::Identity(dim, dim);
  return get_vector(v, key, dim).asDiagonal();
}

Schedule get_schedule(const json& v, const std::string& key) {
  if (!v.is_array()) throw ParseError(key, "must be a list of [t, value] pairs");
  Schedule s;
  for (size_t i = 0; i < v.size(); ++i) {
    const std::string k = key + "[" + std::to_string(i) + "]";
    const Vector pair = get_vector(v[i], k, 2);
    if (!s.points.empty() && pair(0) < s.points.back().first) {
      throw ParseError(k, "times must not decrease");
    }
    s.points.emplace_back(pair(0), pair(1));
  }
  return s;
}

std::string resolve(const std::string& base_dir, const std::string& path, const std::string& key) {
  std::filesystem::path p(path);
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  if (!std::filesystem::exists(p)) {
    throw Error(ErrorCode::MissingFile, key + " refers to missing file '" + p.string() + "'");
  }
  return p.string();
}

PlantModel parse_links(const json& links, const std::string& key) {
  if (!links.is_array() || links.empty()) throw ParseError(key, "must be a nonempty list of links");
  PlantModel model;
  for (size_t i = 0; i < links.size(); ++i) {
    const std::string k = key + "[" + std::to_string(i) + "]";
    const json& l = links[i];
    if (!l.is_object()) throw ParseError(k, "must be an object");
    Link link;
    link.name = string_or(l, "name", k, "link" + std::to_string(i));
    const std::string joint = string_or(l, "joint", k, "revolute");
    if (joint == "revolute") {
      link.joint = JointType::Revolute;
    } else if (joint == "prismatic") {
      link.joint = JointType::Prismatic;
    } else {
      throw ParseError(k + ".joint", "must be 'revolute' or 'prismatic'");
    }
    link.axis_angle = number_or(l, "axis_deg", k, 0.0) * std::numbers::pi / 180.0;
    link.mass = number_or(l, "mass", k, 1.0);
    link.length = number_or(l, "length", k, 1.0);
    link.com = number_or(l, "com", k, 0.5 * link.length);
    link.inertia = number_or(l, "inertia", k, 0.0);
    link.rotor_inertia = number_or(l, "rotor_inertia", k, 0.0);
    link.human = bool_or(l, "human", k, false);
    if (!(link.mass > 0.0)) throw ParseError(k + ".mass", "must be positive");
    if (!(link.length > 0.0)) throw ParseError(k + ".length", "must be positive");
    if (!(link.com >= 0.0 && link.com <= link.length)) throw ParseError(k + ".com", "must lie on the link");
    if (link.inertia < 0.0) throw ParseError(k + ".inertia", "must be nonnegative");
    if (link.rotor_inertia < 0.0) throw ParseError(k + ".rotor_inertia", "must be nonnegative");
    model.links.push_back(link);
  }
  return model;
}

void parse_plant(const json& plant, Scenario& s) {
  if (!plant.is_object()) throw ParseError("plant", "must be an object");
  if (const json* links = child(plant, "links")) {
    s.plant = parse_links(*links, "plant.links");
    s.q0 = Vector::Zero(s.plant.dof());
    s.contact.link = s.plant.links.back().name;
    s.task_link = s.contact.link;
  }
  s.plant.gravity = number_or(plant, "gravity", "plant", s.plant.gravity);
  if (s.plant.gravity < 0.0) throw ParseError("plant.gravity", "must be nonnegative");
  if (const json* q0 = child(plant, "q0")) s.q0 = get_vector(*q0, "plant.q0", s.plant.dof());
  s.qdot0 = Vector::Zero(s.plant.dof());
  if (const json* v = child(plant, "qdot0")) s.qdot0 = get_vector(*v, "plant.qdot0", s.plant.dof());
}

void parse_contact(const json& c, Scenario& s) {
  if (!c.is_object()) throw ParseError("contact", "must be an object");
  s.contact_enabled = bool_or(c, "enabled", "contact", true);
  s.contact.link = string_or(c, "link", "contact", s.contact.link);
  s.task_link = s.contact.link;
  s.contact.distance = number_or(c, "distance", "contact", -1.0);
  if (const json* dirs = child(c, "directions")) {
    if (!dirs->is_array() || dirs->empty() || dirs->size() > 3) {
      throw ParseError("contact.directions", "must list 1 to 3 of \"x\", \"z\", \"rot\"");
    }
    s.contact.directions.clear();
    for (const auto& d : *dirs) {
      const std::string name = d.is_string() ? d.get<std::string>() : "";
      if (name == "x") {
        s.contact.directions.push_back(ContactDirection::X);
      } else if (name == "z") {
        s.contact.directions.push_back(ContactDirection::Z);
      } else if (name == "rot") {
        s.contact.directions.push_back(ContactDirection::Rotation);
      } else {
        throw ParseError("contact.directions", "unknown direction '" + d.dump() + "'");
      }
    }
  }
}

void parse_controller(const json& c, Scenario& s) {
  if (!c.is_object()) throw ParseError("controller", "must be an object");
  ControllerSpec& ctrl = s.controller;
  ctrl.enabled = bool_or(c, "enabled", "controller", true);
  if (const json* levels = child(c, "stiffness_levels")) {
    if (!levels->is_array() || levels->size() != 4) {
      throw ParseError("controller.stiffness_levels", "must list exactly 4 stiffness entries");
    }
    for (size_t i = 0; i < 4; ++i) {
      const std::string k = "controller.stiffness_levels[" + std::to_string(i) + "]";
      ctrl.table[i] = get_matrix((*levels)[i], k, 2);
      if (!psd_check(ctrl.table[i], 1e-9 * std::max(1.0, inf_norm(ctrl.table[i]))).is_psd) {
        throw ParseError(k, "must be positive semidefinite");
      }
    }
  }
  if (const json* level = child(c, "level")) {
    if (!level->is_number_integer()) throw ParseError("controller.level", "must be an integer");
    ctrl.level = level->get<int>();
  }
  if (ctrl.level < 1 || ctrl.level > 4) throw ParseError("controller.level", "must be in 1..4");
  if (const json* v = child(c, "x_eq")) ctrl.x_eq = get_vector(*v, "controller.x_eq", 2);
  if (const json* v = child(c, "f_gravity")) ctrl.f_gravity = get_vector(*v, "controller.f_gravity", 2);
  ctrl.panel_mass = number_or(c, "panel_mass", "controller", ctrl.panel_mass);
  if (ctrl.panel_mass < 0.0) throw ParseError("controller.panel_mass", "must be nonnegative");
  if (const json* v = child(c, "damping")) ctrl.damping = get_matrix(*v, "controller.damping", 2);
  ctrl.gravity_compensation = bool_or(c, "gravity_compensation", "controller", true);
  ctrl.posture_stiffness = number_or(c, "posture_stiffness", "controller", ctrl.posture_stiffness);
  ctrl.posture_damping = number_or(c, "posture_damping", "controller", ctrl.posture_damping);
  if (ctrl.posture_stiffness < 0.0) throw ParseError("controller.posture_stiffness", "must be nonnegative");
  if (ctrl.posture_damping < 0.0) throw ParseError("controller.posture_damping", "must be nonnegative");

  const auto joints = static_cast<Eigen::Index>(s.plant.srl_dofs().size());
  ctrl.friction = FrictionModel::coulomb_only(joints, 0.5);
  if (const json* f = child(c, "friction")) {
    if (!f->is_object()) throw ParseError("controller.friction", "must be an object");
    ctrl.friction_enabled = bool_or(*f, "enabled", "controller.friction", true);
    auto per_joint = [&](const char* name, double fallback) {
      const json* v = child(*f, name);
      const std::string k = std::string("controller.friction.") + name;
      if (!v) return Vector::Constant(joints, fallback).eval();
      if (v->is_number()) return Vector::Constant(joints, get_number(*v, k)).eval();
      return get_vector(*v, k, joints);
    };
    ctrl.friction.coulomb = per_joint("coulomb", 0.5);
    ctrl.friction.viscous = per_joint("viscous", 0.0);
    ctrl.friction.stiction_breakaway_ratio = number_or(*f, "stiction_ratio", "controller.friction", 1.0);
    ctrl.friction.v_eps = number_or(*f, "v_eps", "controller.friction", 1e-3);
    if ((ctrl.friction.coulomb.array() < 0.0).any()) throw ParseError("controller.friction.coulomb", "must be nonnegative");
    if ((ctrl.friction.viscous.array() < 0.0).any()) throw ParseError("controller.friction.viscous", "must be nonnegative");
    if (ctrl.friction.stiction_breakaway_ratio < 1.0) throw ParseError("controller.friction.stiction_ratio", "must be >= 1");
    if (!(ctrl.friction.v_eps > 0.0)) throw ParseError("controller.friction.v_eps", "must be positive");
  }
}

void parse_emg(const json& e, const std::string& base_dir, Scenario& s) {
  if (!e.is_object()) throw ParseError("emg", "must be an object");
  EmgSpec& emg = s.emg;
  if (const json* v = child(e, "trace")) {
    if (!v->is_string()) throw ParseError("emg.trace", "must be a file path");
    emg.trace_path = resolve(base_dir, v->get<std::string>(), "emg.trace");
  }
  if (const json* v = child(e, "profile")) {
    emg.activation_profile = get_schedule(*v, "emg.profile");
    for (const auto& [t, a] : emg.activation_profile.points) {
      if (a < 0.0 || a > 1.0) throw ParseError("emg.profile", "activation values must lie in [0, 1]");
    }
  }
  emg.fs = number_or(e, "fs", "emg", emg.fs);
  if (!(emg.fs > 0.0)) throw ParseError("emg.fs", "must be positive");
  if (const json* v = child(e, "motion")) {
    if (!v->is_string()) throw ParseError("emg.motion", "must be a file path");
    emg.motion_path = resolve(base_dir, v->get<std::string>(), "emg.motion");
  }
  if (const json* v = child(e, "yaw_profile")) emg.yaw_profile = get_schedule(*v, "emg.yaw_profile");
  emg.motion_rate = number_or(e, "motion_rate", "emg", emg.motion_rate);
  if (!(emg.motion_rate > 0.0)) throw ParseError("emg.motion_rate", "must be positive");

  PipelineConfig& p = emg.pipeline;
  if (const json* band = child(e, "band")) {
    const Vector b = get_vector(*band, "emg.band", 2);
    p.f_lo = b(0);
    p.f_hi = b(1);
  }
  if (!(p.f_lo > 0.0 && p.f_hi > p.f_lo && p.f_hi < 0.5 * emg.fs)) {
    throw ParseError("emg.band", "need 0 < low < high < fs/2");
  }
  p.window = number_or(e, "window", "emg", p.window);
  if (!(p.window >= 2.0 / emg.fs)) throw ParseError("emg.window", "must cover at least two samples");
  p.gain = number_or(e, "gain", "emg", p.gain);
  if (p.gain < 0.0) throw ParseError("emg.gain", "must be nonnegative");
  if (const json* h = child(e, "hill")) {
    if (!h->is_object()) throw ParseError("emg.hill", "must be an object");
    p.hill.f_max = number_or(*h, "f_max", "emg.hill", p.hill.f_max);
    p.hill.act_tau_rise = number_or(*h, "tau_rise", "emg.hill", p.hill.act_tau_rise);
    p.hill.act_tau_fall = number_or(*h, "tau_fall", "emg.hill", p.hill.act_tau_fall);
    p.hill.fl_factor = number_or(*h, "fl_factor", "emg.hill", p.hill.fl_factor);
    p.hill.fv_factor = number_or(*h, "fv_factor", "emg.hill", p.hill.fv_factor);
    p.hill.mvc_reference = number_or(*h, "mvc_reference", "emg.hill", p.hill.mvc_reference);
    try {
      p.hill.validate();
    } catch (const Error& err) {
      throw ParseError("emg.hill", err.what());
    }
  }
  if (const json* g = child(e, "gate")) {
    p.gate_threshold = number_or(*g, "threshold", "emg.gate", p.gate_threshold);
    p.gate_hysteresis = number_or(*g, "hysteresis", "emg.gate", p.gate_hysteresis);
  }
  if (!(p.gate_hysteresis >= 0.0 && p.gate_threshold > p.gate_hysteresis)) {
    throw ParseError("emg.gate", "need threshold > hysteresis >= 0");
  }
}

void parse_panel(const json& pnl, Scenario& s) {
  if (!pnl.is_object()) throw ParseError("panel", "must be an object");
  PanelMotion& p = s.panel;
  const std::string kind = string_or(pnl, "motion", "panel", "hold");
  if (kind == "hold") {
    p.kind = PanelMotion::Kind::Hold;
  } else if (kind == "sweep") {
    p.kind = PanelMotion::Kind::Sweep;
  } else {
    throw ParseError("panel.motion", "must be 'hold' or 'sweep'");
  }
  p.amplitude = number_or(pnl, "amplitude", "panel", p.amplitude);
  p.speed = number_or(pnl, "speed", "panel", p.speed);
  p.accel_time = number_or(pnl, "accel_time", "panel", p.accel_time);
  p.start = number_or(pnl, "start", "panel", p.start);
  if (const json* c = child(pnl, "cycles")) {
    if (!c->is_number_integer() || c->get<int>() < 0) throw ParseError("panel.cycles", "must be a nonnegative integer");
    p.cycles = c->get<int>();
  }
  if (const json* z = child(pnl, "z0")) p.z0 = get_number(*z, "panel.z0");
  if (!(p.speed > 0.0)) throw ParseError("panel.speed", "must be positive");
  if (!(p.accel_time > 0.0)) throw ParseError("panel.accel_time", "must be positive");
  if (p.start < 0.0) throw ParseError("panel.start", "must be nonnegative");
}

void parse_sim(const json& sim, Scenario& s) {
  if (!sim.is_object()) throw ParseError("sim", "must be an object");
  SimSpec& spec = s.sim;
  spec.dt = number_or(sim, "dt", "sim", spec.dt);
  if (!(spec.dt > 0.0)) throw ParseError("sim.dt", "must be positive");
  if (spec.dt > 0.01) throw ParseError("sim.dt", "must not exceed 0.01");
  spec.duration = number_or(sim, "duration", "sim", spec.duration);
  if (spec.duration < 0.0) throw ParseError("sim.duration", "must be nonnegative");
  const std::string mode = string_or(sim, "mode", "sim", "inverse-dynamics");
  if (mode == "inverse-dynamics") {
    spec.mode = SimMode::InverseDynamics;
  } else if (mode == "tracking") {
    spec.mode = SimMode::Tracking;
  } else {
    throw ParseError("sim.mode", "must be 'inverse-dynamics' or 'tracking'");
  }
  if (const json* seed = child(sim, "seed")) {
    if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<long long>() >= 0)) {
      throw ParseError("sim.seed", "must be a nonnegative integer");
    }
    spec.seed = seed->get<std::uint64_t>();
  }
  spec.baumgarte = number_or(sim, "baumgarte", "sim", spec.baumgarte);
  if (!(spec.baumgarte >= 0.0)) throw ParseError("sim.baumgarte", "must be nonnegative");
}

}  // namespace

ParametricSupport parse_stability(const json& doc, const std::string& key) {
  if (!doc.is_object()) throw ParseError(key, "must be an object");
  ParametricSupport sup;
  sup.mass = number_or(doc, "mass", key, 1.0);
  if (!(sup.mass > 0.0)) throw ParseError(key + ".mass", "must be positive");
  sup.gravity = number_or(doc, "gravity", key, kGravity);
  if (const json* v = child(doc, "p_bar")) sup.p_bar = get_vector(*v, key + ".p_bar", 6);
  if (const json* v = child(doc, "com_offset")) sup.com_offset = get_vector(*v, key + ".com_offset", 3);

  const json* joints = child(doc, "joints");
  if (!joints || !joints->is_array() || joints->empty()) {
    throw ParseError(key + ".joints", "must be a nonempty list");
  }
  for (size_t i = 0; i < joints->size(); ++i) {
    const std::string k = key + ".joints[" + std::to_string(i) + "]";
    const json& j = (*joints)[i];
    SupportJoint jt;
    const std::string type = string_or(j, "type", k, "pose");
    if (type == "pose") {
      jt.kind = SupportJoint::Kind::Pose;
      const json* idx = child(j, "index");
      if (!idx || !idx->is_number_integer() || idx->get<int>() < 0 || idx->get<int>() > 5) {
        throw ParseError(k + ".index", "must be an integer in 0..5");
      }
      jt.index = idx->get<int>();
      jt.scale = number_or(j, "scale", k, 1.0);
    } else if (type == "distance" || type == "angle") {
      jt.kind = type == "distance" ? SupportJoint::Kind::Distance : SupportJoint::Kind::Angle;
      if (const json* v = child(j, "anchor")) jt.anchor = get_vector(*v, k + ".anchor", 3);
      if (const json* v = child(j, "attach")) jt.attach = get_vector(*v, k + ".attach", 3);
    } else {
      throw ParseError(k + ".type", "must be 'pose', 'distance' or 'angle'");
    }
    sup.joints.push_back(jt);
  }
  const auto nq = static_cast<Eigen::Index>(sup.joints.size());
  sup.k_q = Matrix::Zero(nq, nq);
  if (const json* v = child(doc, "k_q")) sup.k_q = get_matrix(*v, key + ".k_q", nq);
  if (const json* v = child(doc, "tau_bar")) sup.tau_bar = get_vector(*v, key + ".tau_bar", nq);
  return sup;
}

Scenario parse_scenario(const json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw ParseError("<root>", "scenario must be a JSON object");
  Scenario s = default_scenario();

  const json* plant = child(doc, "plant");
  if (!plant) throw ParseError("plant", "section is required");
  parse_plant(*plant, s);
  s.controller.friction = FrictionModel::coulomb_only(static_cast<Eigen::Index>(s.plant.srl_dofs().size()), 0.5);

  if (const json* c = child(doc, "contact")) parse_contact(*c, s);
  try {
    s.plant.validate();
    s.plant.link_index(s.contact.link);
  } catch (const Error& e) {
    throw ParseError("plant", e.what());
  }
  if (s.plant.srl_dofs().empty()) throw ParseError("plant.links", "needs at least one SRL joint");

  if (const json* c = child(doc, "controller")) parse_controller(*c, s);
  if (const json* e = child(doc, "emg")) parse_emg(*e, base_dir, s);
  if (const json* p = child(doc, "panel")) parse_panel(*p, s);
  if (const json* h = child(doc, "human")) {
    s.sway.amplitude = number_or(*h, "sway_amplitude", "human", 0.0);
    s.sway.frequency = number_or(*h, "sway_frequency", "human", 0.0);
    if (s.sway.frequency < 0.0) throw ParseError("human.sway_frequency", "must be nonnegative");
  }
  const json* sim = child(doc, "sim");
  if (!sim) throw ParseError("sim", "section is required");
  parse_sim(*sim, s);
  if (const json* st = child(doc, "stability")) s.stability = parse_stability(*st);
  return s;
}

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open scenario '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("<root>", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

ParametricSupport load_stability(const std::string& path) {
  const json doc = read_json(path);
  if (!doc.is_object()) throw ParseError("<root>", "config must be a JSON object");
  const json* st = child(doc, "stability");
  if (!st) throw ParseError("stability", "section is required");
  return parse_stability(*st);
}

Scenario load_scenario(const std::string& path) {
  const json doc = read_json(path);
  const auto base = std::filesystem::path(path).parent_path();
  return parse_scenario(doc, base.empty() ? "." : base.string());
}

}  // namespace superlimb
