#include <doctest.h>

#include <cmath>
#include <numbers>

#include "postures.hpp"
#include "superlimb/error.hpp"
#include "superlimb/stability.hpp"
#include "support.hpp"

using namespace superlimb;
using testing::max_abs;

namespace {

constexpr double kG = 9.81;

Vector unit(int i) {
  Vector e = Vector::Zero(6);
  e(i) = 1.0;
  return e;
}

// One vertical prismatic joint: q = z, z_c = z.
SupportPosture vertical_prismatic(double mass, double tau, double k, double z_bar = 0.5) {
  SupportPosture s;
  s.p_bar = Vector::Zero(6);
  s.p_bar(2) = z_bar;
  s.q_bar = Vector::Constant(1, z_bar);
  s.tau_bar = Vector::Constant(1, tau);
  s.k_q = Matrix::Constant(1, 1, k);
  s.mass = mass;
  s.ik_map = [](const Vector& p) { return Vector::Constant(1, p(2)); };
  s.z_of_p = [](const Vector& p) { return p(2); };
  return s;
}

}  // namespace

TEST_CASE("equilibrium residual examples") {
  const double m = 2.0;
  CHECK(max_abs(equilibrium_residual(vertical_prismatic(m, m * kG, 0.0), Vector::Zero(6))) < 1e-6);

  const Vector r = equilibrium_residual(vertical_prismatic(m, 0.0, 0.0), Vector::Zero(6));
  CHECK(r(2) == doctest::Approx(-m * kG).epsilon(1e-6));
  CHECK(max_abs(r - r(2) * unit(2)) < 1e-6);

  CHECK(max_abs(equilibrium_residual(vertical_prismatic(m, 0.0, 0.0), m * kG * unit(2))) < 1e-6);
}

TEST_CASE("potential examples") {
  const double m = 2.0, tau = 15.0, k = 300.0, zb = 0.5;
  const auto s = vertical_prismatic(m, tau, k, zb);
  CHECK(potential(s, s.p_bar) == doctest::Approx(m * kG * zb));

  const auto free = vertical_prismatic(m, 0.0, 0.0, zb);
  const Vector p = s.p_bar + 0.3 * unit(2) + 0.1 * unit(0);
  CHECK(potential(free, p) == doctest::Approx(m * kG * p(2)));

  for (double z : {0.2, 0.45, 0.5, 0.9}) {
    const Vector pz = s.p_bar + (z - zb) * unit(2);
    const double hand = m * kG * z - tau * (z - zb) + 0.5 * k * (z - zb) * (z - zb);
    CHECK(potential(s, pz) == doctest::Approx(hand).epsilon(1e-12));
  }
}

TEST_CASE("gravity Hessian examples") {
  auto s = vertical_prismatic(1.0, 0.0, 0.0);
  CHECK(max_abs(hessian_ez(s, s.p_bar)) < 1e-6);

  // height of a point at radius r on a pivot, pose coordinate 4 is the angle
  const double r = 0.7;
  s.z_of_p = [r](const Vector& p) { return r * std::sin(p(4)); };
  Vector p = Vector::Zero(6);
  p(4) = std::numbers::pi / 2;
  const Matrix h = hessian_ez(s, p);
  CHECK(h(4, 4) == doctest::Approx(-r).epsilon(1e-5));
  CHECK(max_abs(h - h.transpose()) == 0.0);
}

TEST_CASE("joint Hessians") {
  // linear joints have no curvature
  const auto stack = make_posture(testing::prismatic_stack());
  for (int i = 0; i < 6; ++i) CHECK(max_abs(hessian_qi(stack, stack.p_bar, i)) < 1e-6);

  // q = atan2(z, x) about a pivot at the origin
  testing::ParametricSupport one;
  one.joints = {testing::angle_joint(Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero())};
  one.p_bar << 0.4, 0.0, 0.3, 0, 0, 0;
  one.k_q = Matrix::Zero(1, 1);
  one.tau_bar = Vector::Zero(1);
  const auto post = make_posture(one);
  const double x = 0.4, z = 0.3, r4 = std::pow(x * x + z * z, 2);
  const Matrix h = hessian_qi(post, post.p_bar, 0);
  CHECK(h(0, 0) == doctest::Approx(2 * x * z / r4).epsilon(1e-4));
  CHECK(h(2, 2) == doctest::Approx(-2 * x * z / r4).epsilon(1e-4));
  CHECK(h(0, 2) == doctest::Approx((z * z - x * x) / r4).epsilon(1e-4));
  CHECK(max_abs(h - h.transpose()) == 0.0);
}

TEST_CASE("single vertical prismatic support reduces to the servo stiffness") {
  for (double k : {0.0, 5.0, 250.0}) {
    const double m = 1.2;
    const auto rep = stiffness_matrix_kp(vertical_prismatic(m, m * kG, k));
    Matrix expected = Matrix::Zero(6, 6);
    expected(2, 2) = k;
    CHECK(max_abs(rep.k_p - expected) < 1e-4 * (1.0 + k));
    CHECK(rep.is_stable);
  }
}

TEST_CASE("zero torque drops the joint-curvature term") {
  auto s = testing::tripod();
  s.tau_bar = Vector::Zero(6);
  const auto post = make_posture(s);
  const Matrix j = ik_jacobian(post, post.p_bar);
  const Matrix expected = post.mass * post.gravity * hessian_ez(post, post.p_bar) + j.transpose() * post.k_q * j;
  CHECK(max_abs(assemble_kp(post) - expected) < 1e-9 * max_abs(expected));

  auto bare = testing::tripod();
  bare.tau_bar = Vector::Zero(6);
  bare.k_q = Matrix::Zero(6, 6);
  const auto b = make_posture(bare);
  CHECK(max_abs(assemble_kp(b) - b.mass * b.gravity * hessian_ez(b, b.p_bar)) < 1e-9);
}

TEST_CASE("hanging and inverted pendulums") {
  const double m = 1.5, len = 0.6;
  const auto hang = stiffness_matrix_kp(make_posture(testing::pendulum(false, len)));
  CHECK(hang.is_stable);
  CHECK(hang.k_p(0, 0) == doctest::Approx(m * kG / len).epsilon(1e-4));
  CHECK_FALSE(hang.diagnostic_mismatch);

  const auto inv = stiffness_matrix_kp(make_posture(testing::pendulum(true, len)));
  CHECK_FALSE(inv.is_stable);
  CHECK(inv.k_p(0, 0) == doctest::Approx(-m * kG / len).epsilon(1e-4));
  CHECK(inv.eigenvalues(0) < 0.0);
  CHECK_FALSE(inv.diagnostic_mismatch);
}

TEST_CASE("assembled stiffness matches the potential Hessian on every reference posture") {
  for (const auto& [name, support] : testing::reference_supports()) {
    CAPTURE(name);
    const auto post = make_posture(support);
    const auto rep = stiffness_matrix_kp(post);
    CHECK(rep.oracle_rel_error < 1e-3);
    CHECK(max_abs(rep.k_p - rep.k_p.transpose()) <= 1e-6 * max_abs(rep.k_p));
    if (!support.tau_bar) CHECK(rep.residual_norm < 1e-6);
  }
}

TEST_CASE("stability verdict survives unit rescaling") {
  for (const auto& [name, support] : testing::reference_supports()) {
    CAPTURE(name);
    const auto base = make_posture(support);
    auto scaled = base;
    scaled.mass *= 7.0;
    scaled.k_q *= 7.0;
    scaled.tau_bar *= 7.0;
    CHECK(stiffness_matrix_kp(base).is_stable == stiffness_matrix_kp(scaled).is_stable);
  }
}

TEST_CASE("servo stiffness search") {
  CHECK(stabilizing_servo_stiffness(make_posture(testing::prismatic_stack()), 0.0) == 0.0);

  // K_p(alpha) = diag(-c + alpha j^2, b + alpha, ...)
  const double c = 12.0, jj = 0.5, b = 40.0, m = 1.0;
  SupportPosture s;
  s.p_bar = Vector::Zero(6);
  s.q_bar = Vector::Zero(6);
  s.tau_bar = Vector::Zero(6);
  s.k_q = Matrix::Zero(6, 6);
  s.mass = m;
  Vector scale = Vector::Ones(6);
  scale(0) = jj;
  s.ik_map = [scale](const Vector& p) { return Vector(scale.cwiseProduct(p)); };
  s.z_of_p = [=](const Vector& p) {
    return (-c * p(0) * p(0) + b * p.tail(5).squaredNorm()) / (2.0 * m * kG);
  };
  for (double margin : {0.0, 1.0, 10.0}) {
    CHECK(stabilizing_servo_stiffness(s, margin) ==
          doctest::Approx((c + margin) / (jj * jj)).epsilon(1e-6));
  }
  double prev = 0.0;
  for (double margin = 0.0; margin <= 30.0; margin += 2.5) {
    const double a = stabilizing_servo_stiffness(s, margin);
    CHECK(a >= prev);
    prev = a;
  }
  CHECK_THROWS_AS(stabilizing_servo_stiffness(s, 0.0, 1.0), Error);
  CHECK_THROWS_AS(stabilizing_servo_stiffness(vertical_prismatic(1.0, kG, 0.0), 0.0), Error);
}

TEST_CASE("inverse kinematics failures") {
  testing::ParametricSupport s;
  s.joints = {testing::angle_joint(Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero())};
  s.p_bar = Vector::Zero(6);
  s.k_q = Matrix::Zero(1, 1);
  try {
    make_posture(s);
    FAIL("expected IkFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IkFailure);
  }
}
