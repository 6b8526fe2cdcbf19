// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "postures.hpp"
#include "superlimb/dynamics.hpp"
#include "superlimb/emg.hpp"
#include "superlimb/error.hpp"
#include "superlimb/kinematics.hpp"
#include "superlimb/log.hpp"
#include "superlimb/scenario.hpp"
#include "superlimb/simulator.hpp"
#include "superlimb/stability.hpp"
#include "support.hpp"

using namespace superlimb;
using testing::max_abs;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const std::string kScenarios = SUPERLIMB_SCENARIO_DIR;

// ---------------------------------------------------------------- 1-3
struct DecoupleInstance {
  DynamicsSnapshot snap;
};

std::vector<DecoupleInstance> decouple_instances() {
  testing::Rng rng(1001);
  std::vector<DecoupleInstance> out;
  for (int i = 0; i < 500; ++i) {
    const int n = rng.integer(2, 8);
    const int k = rng.integer(1, std::min(3, n - 1));
    out.push_back({{rng.spd(n), rng.vector(n) * 10.0, rng.matrix(k, n), rng.vector(n)}});
  }
  return out;
}

Outcome decoupling_exactness() {
  double worst = 0.0;
  for (const auto& inst : decouple_instances()) {
    const auto& s = inst.snap;
    const auto sol = decouple(s);
    const double b = max_abs(s.a * s.qdd + s.h_bias);
    worst = std::max(worst, decouple_residual(s, sol) / (1.0 + b));
  }
  return {worst <= 1e-8, fmt("500 instances, worst scaled residual %.2e (limit 1e-8)", worst)};
}

Outcome pinv_properties() {
  testing::Rng rng(1002);
  double penrose = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int r = rng.integer(1, 8), c = rng.integer(1, 8);
    const Matrix m = rng.with_rank(r, c, rng.integer(0, std::min(r, c))) * std::pow(10.0, rng.uniform(-2, 2));
    const Matrix p = svd_pinv(m);
    const double sm = std::max(1.0, max_abs(m)), sp = std::max(1.0, max_abs(p));
    penrose = std::max({penrose, max_abs(m * p * m - m) / sm, max_abs(p * m * p - p) / sp,
                        max_abs((m * p).transpose() - m * p), max_abs((p * m).transpose() - p * m)});
  }
  double right = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int n = rng.integer(2, 8);
    const int k = rng.integer(1, n);
    const Matrix w = rng.matrix(k, n);
    right = std::max(right, max_abs(w * dyn_consistent_pinv(w, rng.spd(n)) - Matrix::Identity(k, k)));
  }
  return {penrose <= 1e-9 && right <= 1e-9,
          fmt("Penrose worst %.2e, W W^dagger - I worst %.2e (limit 1e-9)", penrose, right)};
}

Outcome null_projection_properties() {
  double idem = 0.0, annihilate = 0.0;
  for (const auto& inst : decouple_instances()) {
    const auto& s = inst.snap;
    const auto qr = qr_full(s.j_c.transpose());
    const auto sel = selection_matrices(s.k(), s.n());
    const Matrix w = sel.s_kc * qr.q.transpose();
    const Matrix n = null_projection(w, s.a);
    idem = std::max(idem, max_abs(n * n - n));
    annihilate = std::max(annihilate, max_abs(w * n));
  }
  return {idem <= 1e-9 && annihilate <= 1e-9,
          fmt("N^2 - N worst %.2e, W N worst %.2e (limit 1e-9)", idem, annihilate)};
}

// ---------------------------------------------------------------- 4
Outcome kinematic_round_trip() {
  testing::Rng rng(1004);
  double worst = 0.0;
  int square = 0, wide = 0;
  for (int i = 0; i < 200; ++i) {
    const int h1 = rng.integer(1, 3), h2 = rng.integer(0, 2);
    const int s1 = h1 + (i % 2 == 0 ? 0 : rng.integer(1, 2));
    const int s2 = h2 + (i % 4 == 1 ? 1 : 0);
    Matrix j_hat = rng.matrix(h1, s1);
    j_hat.leftCols(h1) += 2.0 * Matrix::Identity(h1, h1);
    Matrix k = rng.matrix(h2, s2);
    k.leftCols(h2) += 2.0 * Matrix::Identity(h2, h2);
    const auto j = make_coupled_jacobian(j_hat, k);
    (j.is_square() ? square : wide)++;
    const Vector qdot_h = rng.vector(h1 + h2);
    worst = std::max(worst, max_abs(j.block * desired_joint_rates(j, qdot_h) - qdot_h));
  }

  // analytic against finite-difference Jacobian of the support point on the planar plant
  const PlantModel plant = default_plant();
  const auto srl = plant.srl_dofs();
  const int link = plant.link_index("wrist");
  const double len = plant.links[static_cast<size_t>(link)].length;
  auto full_q = [&](const Vector& q_s) {
    Vector q = Vector::Zero(plant.dof());
    for (size_t i = 0; i < srl.size(); ++i) q(srl[i]) = q_s(static_cast<Eigen::Index>(i));
    return q;
  };
  ForwardMap fk;
  fk.map = [&](const Vector& q_s) {
    return Vector(point_kinematics(plant, full_q(q_s), Vector::Zero(plant.dof()), link, len).position);
  };
  fk.jacobian = [&](const Vector& q_s) {
    const Matrix jf = point_kinematics(plant, full_q(q_s), Vector::Zero(plant.dof()), link, len).jacobian;
    Matrix js(2, static_cast<Eigen::Index>(srl.size()));
    for (size_t i = 0; i < srl.size(); ++i) js.col(static_cast<Eigen::Index>(i)) = jf.col(srl[i]);
    return js;
  };
  ForwardMap fd_only{fk.map, {}};
  double jac = 0.0;
  for (int i = 0; i < 50; ++i) {
    CoupledConfig c;
    c.q_s = rng.vector(3) * 1.5;
    c.q_h = Vector::Zero(2);
    c.s_types.assign(3, DofType::Rotational);
    c.h_types.assign(2, DofType::Translational);
    c.s1 = {0, 1, 2};
    c.h1 = {0, 1};
    c.k_couple = Matrix::Zero(0, 0);
    jac = std::max(jac, max_abs(coupled_jacobian(c, fk).j_hat - coupled_jacobian(c, fd_only).j_hat));
  }
  return {worst <= 1e-9 && jac <= 1e-6 && square > 0 && wide > 0,
          fmt("%g square + %g wide, worst J qdot_s - qdot_h %.2e; analytic vs FD Jacobian %.2e", square, wide,
              worst, jac)};
}

// ---------------------------------------------------------------- 5
struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
};

Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

int row_of(const SimulationLog& log, const std::string& dir) {
  for (size_t i = 0; i < log.contact_names.size(); ++i)
    if (log.contact_names[i] == dir) return static_cast<int>(i);
  throw Error(ErrorCode::BadModel, "no '" + dir + "' contact row");
}

Outcome stiffness_slope() {
  const Scenario base = load_scenario(kScenarios + "/stiffness_sweep.json");
  std::string detail;
  bool ok = true;
  for (int level = 1; level <= 4; ++level) {
    Scenario s = base;
    s.controller.level = level;
    s.controller.friction_enabled = false;
    const auto log = run_scenario(s);
    const int z = row_of(log, "z");
    std::vector<double> dx, force;
    for (const auto& r : log.records) {
      dx.push_back(r.x_eq(1) - r.x(1));
      force.push_back(r.lambda(z));
    }
    const double k = s.controller.table[static_cast<size_t>(level - 1)](1, 1);
    const double rel = linear_fit(dx, force).slope / k - 1.0;
    ok = ok && std::abs(rel) <= 0.01;
    detail += fmt("K=%g slope err %+.3f%%; ", k, 100 * rel);
  }

  Scenario f = base;
  f.controller.level = 1;
  f.controller.friction_enabled = true;
  const auto log = run_scenario(f);
  const int z = row_of(log, "z");
  double area = 0.0;
  Vector travel = Vector::Zero(log.records.front().q_s.size());
  for (size_t i = 1; i < log.records.size(); ++i) {
    const auto& a = log.records[i - 1];
    const auto& b = log.records[i];
    area += 0.5 * (a.lambda(z) + b.lambda(z)) * (b.panel_z - a.panel_z);
    travel += (b.q_s - a.q_s).cwiseAbs();
  }
  const double predicted = f.controller.friction.coulomb.dot(travel);
  const double rel = std::abs(area) / predicted - 1.0;
  ok = ok && std::abs(rel) <= 0.05 && predicted > 0.0;
  detail += fmt("friction loop %.4f J vs Coulomb %.4f J (%+.2f%%)", std::abs(area), predicted, 100 * rel);
  return {ok, detail};
}

// ---------------------------------------------------------------- 6
double mean_between(const SimulationLog& log, int row, double t0, double t1) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : log.records)
    if (r.t >= t0 && r.t < t1) {
      sum += r.lambda(row);
      ++n;
    }
  return sum / n;
}

Outcome equilibrium_shift_force() {
  const Scenario s = load_scenario(kScenarios + "/emg_shift.json");
  const auto log = run_scenario(s);
  const int z = row_of(log, "z");
  const double t_end = s.sim.duration;
  const double before = mean_between(log, z, 0.2, 0.9);
  const double after = mean_between(log, z, t_end - 1.0, t_end);
  double act = 0.0;
  int n = 0;
  for (const auto& r : log.records)
    if (r.t >= t_end - 1.0) {
      act += r.a;
      ++n;
    }
  const double f_muscle = hill_force(act / n, s.emg.pipeline.hill);
  const double k = s.controller.table[static_cast<size_t>(s.controller.level - 1)](1, 1);
  const double expected = k * s.emg.pipeline.gain * f_muscle;
  const double rel = (after - before) / expected - 1.0;

  Scenario gated = s;
  gated.emg.pipeline.gate_threshold = 10.0;
  Scenario plain = s;
  plain.emg = EmgSpec{};
  const auto a = run_scenario(gated);
  const auto b = run_scenario(plain);
  bool identical = a.records.size() == b.records.size();
  for (size_t i = 0; identical && i < a.records.size(); ++i)
    identical = a.records[i].lambda == b.records[i].lambda;
  return {std::abs(rel) <= 0.02 && identical && expected > 1.0,
          fmt("support rise %.4f N vs K gain F %.4f N (%+.3f%%); ", after - before, expected, 100 * rel) +
              (identical ? "unreachable gate identical to baseline" : "unreachable gate DIFFERS from baseline")};
}

// ---------------------------------------------------------------- 7
Outcome stability_oracle() {
  testing::Rng rng(1007);
  double worst = 0.0;
  int verdict_mismatch = 0;
  double form_gap = 0.0;
  std::string detail;
  for (const auto& [name, support] : testing::reference_supports()) {
    const auto post = make_posture(support);
    const auto rep = stiffness_matrix_kp(post);
    worst = std::max(worst, rep.oracle_rel_error);
    // curvature of U along random unit directions must agree with the quadratic form of K_p
    const double h = 1e-4;
    const double u0 = potential(post, post.p_bar);
    auto curvature = [&](const Vector& d) {
      return (potential(post, post.p_bar + h * d) - 2 * u0 + potential(post, post.p_bar - h * d)) / (h * h);
    };
    const double tol = 1e-3 * max_abs(rep.k_p);
    double min_curv = 1e300;
    for (int i = 0; i < 1000; ++i) {
      Vector d = rng.vector(6);
      d.normalize();
      const double c = curvature(d);
      min_curv = std::min(min_curv, c);
      form_gap = std::max(form_gap, std::abs(c - d.dot(rep.k_p * d)) / max_abs(rep.k_p));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(rep.k_p);
    const double softest = curvature(es.eigenvectors().col(0));
    const bool agrees = rep.is_stable ? min_curv >= -tol && softest >= -tol : softest < -tol;
    if (!agrees) ++verdict_mismatch;
    detail += name + (rep.is_stable ? "=stable " : "=unstable ");
  }
  return {worst <= 1e-3 && verdict_mismatch == 0 && form_gap <= 1e-3,
          fmt("worst oracle error %.2e, curvature vs d'Kd gap %.2e, verdict mismatches %g; ", worst, form_gap,
              verdict_mismatch) +
              detail};
}

// ---------------------------------------------------------------- 8
Outcome plant_validity() {
  PlantModel rod;
  rod.links.push_back(Link{"rod", JointType::Revolute, 0.0, 1.0, 1.0, 0.5, 1.0 / 12.0, 0.0, false});
  const double l_eff = (1.0 / 12.0 + 0.25) / 0.5;
  const double expected = 2.0 * std::numbers::pi * std::sqrt(l_eff / 9.81);
  const double dt = 1e-4, down = -std::numbers::pi / 2;
  PlantState s{Vector::Constant(1, down + 0.01), Vector::Zero(1)};
  std::vector<double> up;
  double t = 0.0;
  while (up.size() < 6 && t < 20.0) {
    const double before = s.q(0) - down;
    s = integrate_step(s, Vector::Zero(1), rod, ConstraintSet{}, dt).state;
    t += dt;
    const double after = s.q(0) - down;
    if (before < 0.0 && after >= 0.0) up.push_back(t - dt * after / (after - before));
  }
  const double period = (up.back() - up.front()) / static_cast<double>(up.size() - 1);
  const double period_err = period / expected - 1.0;

  Scenario sc = default_scenario();
  sc.controller.enabled = false;
  sc.contact_enabled = false;
  sc.sim.duration = 1.0;
  sc.sim.dt = 1e-4;
  const auto log = run_scenario(sc);
  double e0 = 0.0, worst = 0.0, ke_max = 0.0;
  for (size_t i = 0; i < log.records.size(); ++i) {
    Vector q = sc.q0, qd = Vector::Zero(4);
    const auto srl = sc.plant.srl_dofs();
    for (size_t j = 0; j < srl.size(); ++j) {
      q(srl[j]) = log.records[i].q_s(static_cast<Eigen::Index>(j));
      qd(srl[j]) = log.records[i].qdot_s(static_cast<Eigen::Index>(j));
    }
    const double e = total_energy(sc.plant, {q, qd});
    if (i == 0) e0 = e;
    worst = std::max(worst, std::abs(e - e0));
    ke_max = std::max(ke_max, kinetic_energy(sc.plant, q, qd));
  }
  const double drift = worst / ke_max;
  return {std::abs(period_err) <= 0.01 && drift < 1e-3,
          fmt("period %.5f s vs %.5f s (%+.3f%%); energy drift %.3f%% of peak kinetic energy", period, expected,
              100 * period_err, 100 * drift)};
}

// ---------------------------------------------------------------- 9
Outcome determinism() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"emg_shift.json", "stiffness_sweep.json"}) {
    Scenario s = load_scenario(kScenarios + "/" + name);
    s.controller.friction_enabled = true;
    if (std::string(name) == "stiffness_sweep.json") s.sim.duration = 2.0;
    std::ostringstream a, b;
    write_log_csv(a, run_scenario(s));
    write_log_csv(b, run_scenario(s));
    const bool same = a.str() == b.str() && !a.str().empty();
    ok = ok && same;
    detail += std::string(name) + (same ? " identical (" : " DIFFERENT (") + std::to_string(a.str().size()) +
              " bytes) ";
  }
  return {ok, detail};
}

// ---------------------------------------------------------------- 10
Outcome emg_pipeline() {
  const double fs = 1000.0;
  const std::vector<double> dc(4000, 2.5);
  const auto y = bandpass(dc, 20, 450, fs);
  double dc_res = 0.0;
  for (size_t i = 1000; i < 3000; ++i) dc_res = std::max(dc_res, std::abs(y[i]));
  dc_res /= 2.5;

  std::vector<double> sine(3000);
  for (size_t i = 0; i < sine.size(); ++i) sine[i] = std::sin(2 * std::numbers::pi * 50.0 * i / fs);
  const double env = envelope(sine, 0.5, fs).back();
  const double env_err = env * std::sqrt(2.0) - 1.0;

  testing::Rng rng(1010);
  bool bounded = true;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(1000);
    const double scale = std::pow(10.0, rng.uniform(-3, 1));
    for (double& v : x) v = scale * rng.uniform();
    for (const auto& r : run_pipeline(x, fs, 0.0, std::nullopt, PipelineConfig{}))
      bounded = bounded && r.activation >= 0.0 && r.activation <= 1.0;
  }
  const bool zero_force = hill_force(0.0, HillParams{}) == 0.0;
  return {dc_res < 1e-6 && std::abs(env_err) <= 0.02 && bounded && zero_force,
          fmt("DC residual %.1e, sine envelope err %+.3f%%, ", dc_res, 100 * env_err) +
              (bounded ? "activation bounded on 100 traces, " : "activation OUT OF BOUNDS, ") +
              (zero_force ? "hill_force(0) = 0" : "hill_force(0) != 0")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "decoupling exactness", 5.0, decoupling_exactness},
      {2, "pseudo-inverse properties", 5.0, pinv_properties},
      {3, "null-projection properties", 5.0, null_projection_properties},
      {4, "kinematic round trip", 5.0, kinematic_round_trip},
      {5, "stiffness slope and friction loop", 30.0, stiffness_slope},
      {6, "equilibrium-shift force", 30.0, equilibrium_shift_force},
      {7, "stability oracle agreement", 10.0, stability_oracle},
      {8, "plant validity", 10.0, plant_validity},
      {9, "determinism", 30.0, determinism},
      {10, "EMG pipeline", 5.0, emg_pipeline},
  };
  log::set_threshold(log::Level::Warn);
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = out.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("[%s] criterion %d: %s - %s [%.2f s of %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
