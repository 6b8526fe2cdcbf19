#pragma once

// Planar serial chain used as the simulated human + limb plant.
//
// Coordinates live in the vertical (x, z) plane, gravity points along -z and
// angles are measured from +x towards +z. Each link sits behind one joint:
// a revolute joint adds q_i to the running link angle, a prismatic joint
// slides the frame by q_i along (running angle + axis_angle). The link then
// extends `length` along the running angle with its point mass at `com`.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "superlimb/numerics.hpp"

namespace superlimb {

enum class JointType { Revolute, Prismatic };

struct Link {
  std::string name;
  JointType joint = JointType::Revolute;
  double axis_angle = 0.0;     // rad, prismatic slide direction
  double mass = 1.0;           // kg
  double length = 1.0;         // m
  double com = 0.5;            // m along the link
  double inertia = 0.0;        // kg m^2 about the CoM
  double rotor_inertia = 0.0;  // kg m^2 or kg, added to the joint's diagonal
  bool human = false;          // scripted (human) DoF rather than actuated SRL DoF
};

struct PlantModel {
  std::vector<Link> links;
  double gravity = 9.81;

  /// Throws BadModel on nonpositive mass or length, negative inertias, a CoM
  /// outside the link, or an empty chain.
  void validate() const;
  Eigen::Index dof() const { return static_cast<Eigen::Index>(links.size()); }
  /// Throws BadModel for unknown names.
  int link_index(const std::string& name) const;
  std::vector<int> human_dofs() const;
  std::vector<int> srl_dofs() const;
};

/// Kinematics of a point fixed on a link.
struct PointKinematics {
  Eigen::Vector2d position;
  double angle = 0.0;
  Matrix jacobian;           // 2 x n, rows (x, z)
  Eigen::RowVectorXd angular_jacobian;  // 1 x n
  Eigen::Vector2d bias_acceleration;    // J' qdot
};

PointKinematics point_kinematics(const PlantModel& model, const Vector& q, const Vector& qdot,
                                 int link, double distance);

struct PlantDynamics {
  Matrix a;      // inertia
  Vector h_bias; // Coriolis/centrifugal + gravity
};

/// Lagrangian dynamics A(q) qdd + h(q, qdot) = tau of the chain.
PlantDynamics plant_dynamics(const PlantModel& model, const Vector& q, const Vector& qdot);

/// Gravity part of h, i.e. h(q, 0).
Vector gravity_torque(const PlantModel& model, const Vector& q);

double kinetic_energy(const PlantModel& model, const Vector& q, const Vector& qdot);
double potential_energy(const PlantModel& model, const Vector& q);

enum class ContactDirection { X, Z, Rotation };

/// Support point on a link and the Cartesian directions it constrains.
struct ContactSpec {
  std::string link;
  double distance = -1.0;  // along the link; negative means the link tip
  std::vector<ContactDirection> directions{ContactDirection::Z};
};

/// Selected rows of the support-point Jacobian in the global frame.
Matrix contact_jacobian(const PlantModel& model, const Vector& q, const ContactSpec& contact);

/// Selected components of the support point position (x, z, angle).
Vector contact_position(const PlantModel& model, const Vector& q, const ContactSpec& contact);

/// Selected rows of J_c' qdot.
Vector contact_bias(const PlantModel& model, const Vector& q, const Vector& qdot,
                    const ContactSpec& contact);

/// Planar 3-revolute limb mounted on a 1-DoF prismatic human sway joint.
PlantModel default_plant();

}  // namespace superlimb
