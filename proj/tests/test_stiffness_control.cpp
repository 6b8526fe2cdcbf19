#include <doctest.h>

#include <cmath>

#include "superlimb/error.hpp"
#include "superlimb/plant.hpp"
#include "superlimb/stiffness_control.hpp"
#include "support.hpp"

using namespace superlimb;
using testing::max_abs;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix diag(std::initializer_list<double> v) { return vec(v).asDiagonal(); }

}  // namespace

TEST_CASE("spring force at equilibrium is zero") {
  const auto c = TaskSpaceController::make(diag({100, 100}), vec({0.2, 0.3}), Vector::Zero(2));
  CHECK(max_abs(control_force(c, vec({0.2, 0.3}))) == 0.0);
}

TEST_CASE("Hooke examples") {
  auto c = TaskSpaceController::make(diag({100}), vec({0.05}), Vector::Zero(1));
  CHECK(control_force(c, vec({0.0}))(0) == doctest::Approx(5.0));

  c = TaskSpaceController::make(diag({200, 300}), vec({0.01, -0.02}), vec({0, 10}));
  const Vector f = control_force(c, Vector::Zero(2));
  CHECK(f(0) == doctest::Approx(2.0));
  CHECK(f(1) == doctest::Approx(4.0));
}

TEST_CASE("damping opposes task velocity") {
  auto c = TaskSpaceController::make(diag({100, 100}), Vector::Zero(2), Vector::Zero(2));
  c.damping = diag({10, 20});
  const Vector f = control_force(c, Vector::Zero(2), vec({1, -1}));
  CHECK(f(0) == doctest::Approx(-10.0));
  CHECK(f(1) == doctest::Approx(20.0));
}

TEST_CASE("stiffness levels") {
  const auto table = default_stiffness_table(1);
  auto c = TaskSpaceController::make(diag({1}), vec({0}), vec({0}));
  const auto l1 = set_stiffness_level(c, 1, table);
  CHECK(l1.k_task(0, 0) == 100.0);
  CHECK(l1.level == 1);
  const auto again = set_stiffness_level(l1, 1, table);
  CHECK(max_abs(again.k_task - l1.k_task) == 0.0);
  CHECK(again.level == l1.level);
  CHECK(max_abs(again.x_eq - l1.x_eq) == 0.0);
  CHECK(set_stiffness_level(c, 4, table).k_task(0, 0) == 800.0);
  for (int bad : {0, 5, -1}) {
    try {
      set_stiffness_level(c, bad, table);
      FAIL("expected BadLevel");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BadLevel);
    }
  }
}

TEST_CASE("equilibrium shift examples") {
  auto c = TaskSpaceController::make(diag({100}), vec({0.1}), vec({0}));
  const auto same = shift_equilibrium(c, vec({0}));
  CHECK(max_abs(same.x_eq - c.x_eq) == 0.0);
  CHECK((shift_equilibrium(c, vec({5})).x_eq - c.x_eq)(0) == doctest::Approx(0.05));

  c = TaskSpaceController::make(diag({200, 400}), vec({0, 0}), vec({0, 0}));
  const Vector dx = shift_equilibrium(c, vec({10, 10})).x_eq - c.x_eq;
  CHECK(dx(0) == doctest::Approx(0.05));
  CHECK(dx(1) == doctest::Approx(0.025));
}

TEST_CASE("equilibrium shift raises the force by exactly delta F") {
  testing::Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix k = rng.spd(3) * 100.0;
    auto c = TaskSpaceController::make(k, rng.vector(3), rng.vector(3));
    const Vector df = rng.vector(3) * 10.0;
    const Vector x = rng.vector(3);
    CHECK(max_abs(control_force(shift_equilibrium(c, df), x) - control_force(c, x) - df) < 1e-9);
  }
}

TEST_CASE("equilibrium shift the stiffness cannot produce") {
  auto c = TaskSpaceController::make(diag({100, 0}), vec({0, 0}), vec({0, 0}));
  try {
    shift_equilibrium(c, vec({0, 1}));
    FAIL("expected SingularStiffness");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularStiffness);
  }
  CHECK(shift_equilibrium(c, vec({1, 0})).x_eq(0) == doctest::Approx(0.01));
}

TEST_CASE("task force to joint torque") {
  CHECK(max_abs(task_to_joint_torque(Matrix::Ones(2, 3), Vector::Zero(2))) == 0.0);
  CHECK(task_to_joint_torque(Matrix::Constant(1, 1, 1.0), vec({5}))(0) == doctest::Approx(5.0));

  // virtual work: tau . dq = F . dx for small dq
  PlantModel p;
  p.links.push_back(Link{"a", JointType::Revolute, 0.0, 1.0, 0.7, 0.35, 0.0, 0.0, false});
  p.links.push_back(Link{"b", JointType::Revolute, 0.0, 1.0, 0.5, 0.25, 0.0, 0.0, false});
  const Vector q = vec({0.3, 0.8});
  const Vector f = vec({3.0, -7.0});
  auto tip = [&](const Vector& x) {
    return Vector(point_kinematics(p, x, Vector::Zero(2), 1, 0.5).position);
  };
  const Matrix j = point_kinematics(p, q, Vector::Zero(2), 1, 0.5).jacobian;
  const Vector tau = task_to_joint_torque(j, f);
  for (int i = 0; i < 2; ++i) {
    Vector e = Vector::Zero(2);
    e(i) = 1e-6;
    const double work = f.dot(tip(q + e) - tip(q - e)) / 2e-6;
    CHECK(std::abs(tau(i) - work) < 1e-8);
  }
}

TEST_CASE("friction torque") {
  const auto m = FrictionModel::coulomb_only(1, 0.5);
  CHECK(friction_torque(m, vec({0}), vec({0}))(0) == 0.0);

  FrictionModel cv;
  cv.coulomb = vec({0.5});
  cv.viscous = vec({0.1});
  CHECK(friction_torque(cv, vec({2}), vec({0}))(0) == doctest::Approx(-0.7));
  CHECK(friction_torque(cv, vec({-2}), vec({0}))(0) == doctest::Approx(0.7));

  // inside the stiction band friction cancels the applied torque up to breakaway
  CHECK(friction_torque(cv, vec({0}), vec({0.3}))(0) == doctest::Approx(-0.3));
  CHECK(friction_torque(cv, vec({0}), vec({2.0}))(0) == doctest::Approx(-0.5));
  cv.stiction_breakaway_ratio = 1.5;
  CHECK(friction_torque(cv, vec({0}), vec({2.0}))(0) == doctest::Approx(-0.75));
  CHECK(max_abs(friction_torque(FrictionModel::none(3), vec({1, -1, 0}), vec({1, 1, 1}))) == 0.0);
}

TEST_CASE("friction model validation") {
  auto m = FrictionModel::coulomb_only(2, 0.5);
  CHECK_NOTHROW(m.validate(2));
  CHECK_THROWS_AS(m.validate(3), Error);
  m.coulomb(0) = -1.0;
  CHECK_THROWS_AS(m.validate(2), Error);
}
