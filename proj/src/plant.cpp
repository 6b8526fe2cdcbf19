#include "superlimb/plant.hpp"

#include <cmath>
#include <string>

#include "superlimb/error.hpp"

namespace superlimb {
namespace {

using Vec2 = Eigen::Vector2d;

Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

void check_sizes(const PlantModel& model, const Vector& q, const Vector& qdot) {
  if (q.size() != model.dof() || qdot.size() != model.dof()) {
    throw Error(ErrorCode::DimensionMismatch, "plant state has wrong length");
  }
}

// Per-joint frame data collected during the outward sweep.
struct JointFrame {
  Vec2 origin;  // joint location
  Vec2 slide;   // prismatic direction (unused for revolute)
};

// Walks the chain, calling `visit(link_index, frame_origin, angle, omega,
// origin_bias, frames)` after each joint has been applied.
template <typename Visit>
void walk(const PlantModel& model, const Vector& q, const Vector& qdot, Visit&& visit) {
  Vec2 origin = Vec2::Zero();
  Vec2 bias = Vec2::Zero();  // origin acceleration with qdd = 0
  double angle = 0.0;
  double omega = 0.0;
  std::vector<JointFrame> frames;
  frames.reserve(model.links.size());

  for (size_t i = 0; i < model.links.size(); ++i) {
    const Link& link = model.links[i];
    const auto qi = static_cast<Eigen::Index>(i);
    if (link.joint == JointType::Revolute) {
      frames.push_back({origin, Vec2::Zero()});
      angle += q(qi);
      omega += qdot(qi);
    } else {
      const Vec2 d = unit(angle + link.axis_angle);
      frames.push_back({origin, d});
      origin += q(qi) * d;
      bias += 2.0 * qdot(qi) * omega * perp(d) - q(qi) * omega * omega * d;
    }
    visit(i, origin, angle, omega, bias, frames);
    const Vec2 u = unit(angle);
    origin += link.length * u;
    bias += -link.length * omega * omega * u;
  }
}

PointKinematics make_point(const PlantModel& model, const std::vector<JointFrame>& frames,
                           size_t link, const Vec2& origin, double angle, double omega,
                           const Vec2& origin_bias, double distance) {
  const Eigen::Index n = model.dof();
  const Vec2 u = unit(angle);
  PointKinematics pk;
  pk.position = origin + distance * u;
  pk.angle = angle;
  pk.bias_acceleration = origin_bias - distance * omega * omega * u;
  pk.jacobian = Matrix::Zero(2, n);
  pk.angular_jacobian = Eigen::RowVectorXd::Zero(n);
  for (size_t j = 0; j <= link; ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    if (model.links[j].joint == JointType::Revolute) {
      pk.jacobian.col(col) = perp(pk.position - frames[j].origin);
      pk.angular_jacobian(col) = 1.0;
    } else {
      pk.jacobian.col(col) = frames[j].slide;
    }
  }
  return pk;
}

}  // namespace

void PlantModel::validate() const {
  if (links.empty()) throw Error(ErrorCode::BadModel, "plant has no links");
  if (!(gravity >= 0.0)) throw Error(ErrorCode::BadModel, "gravity must be nonnegative");
  for (const Link& l : links) {
    const std::string who = "link '" + l.name + "'";
    if (!(l.mass > 0.0)) throw Error(ErrorCode::BadModel, who + " has nonpositive mass");
    if (!(l.length > 0.0)) throw Error(ErrorCode::BadModel, who + " has nonpositive length");
    if (!(l.inertia >= 0.0) || !(l.rotor_inertia >= 0.0)) {
      throw Error(ErrorCode::BadModel, who + " has negative inertia");
    }
    if (!(l.com >= 0.0 && l.com <= l.length)) {
      throw Error(ErrorCode::BadModel, who + " has its CoM outside the link");
    }
  }
}

int PlantModel::link_index(const std::string& name) const {
  for (size_t i = 0; i < links.size(); ++i) {
    if (links[i].name == name) return static_cast<int>(i);
  }
  throw Error(ErrorCode::BadModel, "unknown link '" + name + "'");
}

std::vector<int> PlantModel::human_dofs() const {
  std::vector<int> out;
  for (size_t i = 0; i < links.size(); ++i) {
    if (links[i].human) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> PlantModel::srl_dofs() const {
  std::vector<int> out;
  for (size_t i = 0; i < links.size(); ++i) {
    if (!links[i].human) out.push_back(static_cast<int>(i));
  }
  return out;
}

PointKinematics point_kinematics(const PlantModel& model, const Vector& q, const Vector& qdot,
                                 int link, double distance) {
  check_sizes(model, q, qdot);
  if (link < 0 || link >= static_cast<int>(model.links.size())) {
    throw Error(ErrorCode::BadModel, "link index " + std::to_string(link) + " out of range");
  }
  PointKinematics result;
  walk(model, q, qdot,
       [&](size_t i, const Vec2& origin, double angle, double omega, const Vec2& bias,
           const std::vector<JointFrame>& frames) {
         if (i == static_cast<size_t>(link)) {
           result = make_point(model, frames, i, origin, angle, omega, bias, distance);
         }
       });
  return result;
}

PlantDynamics plant_dynamics(const PlantModel& model, const Vector& q, const Vector& qdot) {
  model.validate();
  check_sizes(model, q, qdot);
  const Eigen::Index n = model.dof();
  PlantDynamics out{Matrix::Zero(n, n), Vector::Zero(n)};
  const Vec2 g_acc(0.0, model.gravity);

  walk(model, q, qdot,
       [&](size_t i, const Vec2& origin, double angle, double omega, const Vec2& bias,
           const std::vector<JointFrame>& frames) {
         const Link& l = model.links[i];
         const PointKinematics c = make_point(model, frames, i, origin, angle, omega, bias, l.com);
         out.a += l.mass * c.jacobian.transpose() * c.jacobian +
                  l.inertia * c.angular_jacobian.transpose() * c.angular_jacobian;
         out.h_bias += l.mass * c.jacobian.transpose() * (c.bias_acceleration + g_acc);
       });
  for (Eigen::Index i = 0; i < n; ++i) out.a(i, i) += model.links[static_cast<size_t>(i)].rotor_inertia;
  out.a = 0.5 * (out.a + out.a.transpose());
  return out;
}

Vector gravity_torque(const PlantModel& model, const Vector& q) {
  return plant_dynamics(model, q, Vector::Zero(q.size())).h_bias;
}

double kinetic_energy(const PlantModel& model, const Vector& q, const Vector& qdot) {
  const PlantDynamics d = plant_dynamics(model, q, qdot);
  return 0.5 * qdot.dot(d.a * qdot);
}

double potential_energy(const PlantModel& model, const Vector& q) {
  const Vector zero = Vector::Zero(q.size());
  double u = 0.0;
  walk(model, q, zero,
       [&](size_t i, const Vec2& origin, double angle, double, const Vec2&,
           const std::vector<JointFrame>&) {
         const Link& l = model.links[i];
         u += l.mass * model.gravity * (origin + l.com * unit(angle)).y();
       });
  return u;
}

namespace {

PointKinematics contact_point(const PlantModel& model, const Vector& q, const Vector& qdot,
                              const ContactSpec& contact) {
  const int link = model.link_index(contact.link);
  const double dist =
      contact.distance < 0.0 ? model.links[static_cast<size_t>(link)].length : contact.distance;
  return point_kinematics(model, q, qdot, link, dist);
}

void check_directions(const ContactSpec& contact) {
  if (contact.directions.empty() || contact.directions.size() > 3) {
    throw Error(ErrorCode::BadModel, "contact must constrain 1 to 3 directions");
  }
}

}  // namespace

Matrix contact_jacobian(const PlantModel& model, const Vector& q, const ContactSpec& contact) {
  check_directions(contact);
  const PointKinematics pk = contact_point(model, q, Vector::Zero(q.size()), contact);
  Matrix jc(static_cast<Eigen::Index>(contact.directions.size()), model.dof());
  for (size_t r = 0; r < contact.directions.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    switch (contact.directions[r]) {
      case ContactDirection::X: jc.row(row) = pk.jacobian.row(0); break;
      case ContactDirection::Z: jc.row(row) = pk.jacobian.row(1); break;
      case ContactDirection::Rotation: jc.row(row) = pk.angular_jacobian; break;
    }
  }
  return jc;
}

Vector contact_position(const PlantModel& model, const Vector& q, const ContactSpec& contact) {
  check_directions(contact);
  const PointKinematics pk = contact_point(model, q, Vector::Zero(q.size()), contact);
  Vector x(static_cast<Eigen::Index>(contact.directions.size()));
  for (size_t r = 0; r < contact.directions.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    switch (contact.directions[r]) {
      case ContactDirection::X: x(row) = pk.position.x(); break;
      case ContactDirection::Z: x(row) = pk.position.y(); break;
      case ContactDirection::Rotation: x(row) = pk.angle; break;
    }
  }
  return x;
}

Vector contact_bias(const PlantModel& model, const Vector& q, const Vector& qdot,
                    const ContactSpec& contact) {
  check_directions(contact);
  const PointKinematics pk = contact_point(model, q, qdot, contact);
  Vector b(static_cast<Eigen::Index>(contact.directions.size()));
  for (size_t r = 0; r < contact.directions.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    switch (contact.directions[r]) {
      case ContactDirection::X: b(row) = pk.bias_acceleration.x(); break;
      case ContactDirection::Z: b(row) = pk.bias_acceleration.y(); break;
      case ContactDirection::Rotation: b(row) = 0.0; break;
    }
  }
  return b;
}

PlantModel default_plant() {
  PlantModel m;
  m.links = {
      {"sway", JointType::Prismatic, 0.0, 4.0, 0.2, 0.1, 0.02, 0.0, true},
      {"shoulder", JointType::Revolute, 0.0, 1.5, 0.45, 0.225, 1.5 * 0.45 * 0.45 / 12.0, 0.01, false},
      {"elbow", JointType::Revolute, 0.0, 1.0, 0.40, 0.20, 1.0 * 0.40 * 0.40 / 12.0, 0.01, false},
      {"wrist", JointType::Revolute, 0.0, 0.5, 0.15, 0.075, 0.5 * 0.15 * 0.15 / 12.0, 0.005, false},
  };
  return m;
}

}  // namespace superlimb
