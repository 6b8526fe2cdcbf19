#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "superlimb/csv.hpp"
#include "superlimb/emg.hpp"
#include "superlimb/error.hpp"
#include "superlimb/log.hpp"
#include "superlimb/scenario.hpp"
#include "superlimb/simulator.hpp"
#include "superlimb/stability.hpp"

namespace sl = superlimb;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kNumeric = 2;

int cmd_run(const std::string& config, const std::string& out) {
  const sl::Scenario scenario = sl::load_scenario(config);
  sl::log::info("running '" + config + "'");
  const sl::SimulationLog log = sl::run_scenario(scenario);
  sl::write_log_csv(out, log);
  sl::log::info("wrote " + std::to_string(log.records.size()) + " records to '" + out + "'");
  return kOk;
}

int cmd_emg(const std::string& in, const std::optional<std::string>& motion_path, const std::string& out,
            const sl::PipelineConfig& config) {
  double t0 = 0.0;
  const sl::EmgTrace trace = sl::read_trace_csv(in, &t0);
  if (trace.channels.empty()) throw sl::Error(sl::ErrorCode::DimensionMismatch, "trace has no channels");
  std::optional<std::vector<sl::MotionSample>> motion;
  if (motion_path) motion = sl::read_motion_csv(*motion_path);
  if (trace.channels.size() > 1) sl::log::warn("only the first channel is processed");
  const auto rows = sl::run_pipeline(trace.channels.front().samples, trace.fs, t0, motion, config);
  sl::write_pipeline_csv(out, rows);
  return kOk;
}

int cmd_stability(const std::string& config, double margin) {
  const sl::ParametricSupport support = sl::load_stability(config);
  const sl::SupportPosture posture = sl::make_posture(support);
  const sl::StabilityReport r = sl::stiffness_matrix_kp(posture);
  if (r.diagnostic_mismatch) sl::log::warn("analytic K_p disagrees with the potential Hessian");

  auto num = sl::csv::format_number;
  std::cout << "is_stable=" << (r.is_stable ? "true" : "false") << '\n'
            << "min_eigenvalue=" << num(r.margin) << '\n'
            << "tolerance=" << num(r.tolerance) << '\n'
            << "oracle_rel_error=" << num(r.oracle_rel_error) << '\n'
            << "diagnostic_mismatch=" << (r.diagnostic_mismatch ? "true" : "false") << '\n'
            << "residual_norm=" << num(r.residual_norm) << '\n';
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
    std::cout << "eigenvalue_" << i + 1 << '=' << num(r.eigenvalues(i)) << '\n';
  }
  try {
    std::cout << "servo_stiffness=" << num(sl::stabilizing_servo_stiffness(posture, margin)) << '\n';
  } catch (const sl::Error& e) {
    if (e.code() != sl::ErrorCode::Unachievable) throw;
    std::cout << "servo_stiffness=unachievable\n";
  }
  return kOk;
}

int cmd_gen_emg(const std::string& profile_path, std::uint64_t seed, const std::string& out, double fs,
                double mvc) {
  const sl::csv::Table table = sl::csv::read(profile_path);
  const auto& t = table.column("t");
  const auto& a = table.column("activation");
  sl::Schedule profile;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i > 0 && !(t[i] > t[i - 1])) {
      throw sl::ParseError("t", "profile times must be strictly increasing");
    }
    profile.points.emplace_back(t[i], a[i]);
  }
  if (profile.empty()) throw sl::ParseError("activation", "profile is empty");
  sl::write_trace_csv(out, sl::generate_emg(profile, fs, seed, mvc));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supernumerary limb support simulator"};
  app.require_subcommand(1);

  std::string config, out, in, profile;
  std::optional<std::string> motion;
  std::uint64_t seed = 0;
  double fs = 1000.0;
  double mvc = sl::HillParams{}.mvc_reference;
  double margin = 0.0;
  sl::PipelineConfig pipe;

  auto* run = app.add_subcommand("run", "simulate a scenario and write the step log");
  run->add_option("--config", config, "scenario JSON")->required();
  run->add_option("--out", out, "output CSV")->required();

  auto* emg = app.add_subcommand("emg-pipeline", "turn a raw sEMG trace into force and equilibrium shift");
  emg->add_option("--in", in, "trace CSV (t,ch1,...)")->required();
  emg->add_option("--motion", motion, "shank yaw CSV (t,yaw_rad)");
  emg->add_option("--out", out, "output CSV")->required();
  emg->add_option("--gain", pipe.gain, "equilibrium shift per newton (m/N)");
  emg->add_option("--window", pipe.window, "RMS window (s)");
  emg->add_option("--gate-threshold", pipe.gate_threshold, "yaw threshold (rad)");
  emg->add_option("--gate-hysteresis", pipe.gate_hysteresis, "yaw hysteresis (rad)");
  emg->add_option("--mvc", pipe.hill.mvc_reference, "envelope at full activation (mV)");
  emg->add_option("--f-max", pipe.hill.f_max, "maximum muscle force (N)");

  auto* stab = app.add_subcommand("analyze-stability", "stiffness matrix of a supported posture");
  stab->add_option("--config", config, "JSON with a 'stability' section")->required();
  stab->add_option("--margin", margin, "eigenvalue margin for the servo stiffness search");

  auto* gen = app.add_subcommand("gen-emg", "synthesize an sEMG trace from an activation profile");
  gen->add_option("--profile", profile, "CSV with columns t,activation")->required();
  gen->add_option("--seed", seed, "noise seed")->required();
  gen->add_option("--out", out, "output CSV")->required();
  gen->add_option("--fs", fs, "sample rate (Hz)")->check(CLI::PositiveNumber);
  gen->add_option("--mvc", mvc, "envelope at full activation (mV)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*run) return cmd_run(config, out);
    if (*emg) return cmd_emg(in, motion, out, pipe);
    if (*stab) return cmd_stability(config, margin);
    if (*gen) return cmd_gen_emg(profile, seed, out, fs, mvc);
  } catch (const sl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sl::is_validation_error(e.code()) ? kValidation : kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kValidation;
}
