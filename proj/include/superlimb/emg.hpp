#pragma once

// Surface EMG processing: band-pass, rectification, RMS envelope, first-order
// activation dynamics, a reduced Hill force model, motion gating and the map
// from muscle force to an upward equilibrium-point shift.

#include <optional>
#include <string>
#include <vector>

namespace superlimb {

struct EmgChannel {
  std::string name;
  std::vector<double> samples;  // mV
};

struct EmgTrace {
  double fs = 1000.0;  // Hz
  std::vector<EmgChannel> channels;

  size_t length() const { return channels.empty() ? 0 : channels.front().samples.size(); }
  /// Throws DimensionMismatch / NonFinite on an invalid trace.
  void validate() const;
};

struct HillParams {
  double f_max = 300.0;         // N
  double act_tau_rise = 0.05;   // s
  double act_tau_fall = 0.08;   // s
  double fl_factor = 1.0;
  double fv_factor = 1.0;
  double mvc_reference = 0.2;   // mV of envelope mapping to activation 1

  /// Throws BadModel when a parameter is out of range.
  void validate() const;
};

struct MotionSample {
  double t = 0.0;    // s
  double yaw = 0.0;  // rad about the vertical axis
};

struct BiquadCoefficients {
  double b0 = 0, b1 = 0, b2 = 0;
  double a1 = 0, a2 = 0;  // a0 normalized to 1
};

/// Second-order band-pass centred at sqrt(f_lo * f_hi) with unit peak gain.
/// Throws BadBand unless 0 < f_lo < f_hi < fs / 2.
BiquadCoefficients bandpass_design(double f_lo, double f_hi, double fs);

/// Zero-phase (forward then backward) application of the band-pass.
EmgTrace bandpass(const EmgTrace& trace, double f_lo, double f_hi);
std::vector<double> bandpass(const std::vector<double>& x, double f_lo, double f_hi, double fs);

EmgTrace rectify(const EmgTrace& trace);

/// Causal moving RMS. Windows at the start use the samples available so far.
/// Throws BadWindow when window < 2 / fs.
EmgTrace envelope(const EmgTrace& trace, double window);
std::vector<double> envelope(const std::vector<double>& x, double window, double fs);

/// Streaming form of `envelope`.
class RmsEnvelope {
 public:
  RmsEnvelope(double window, double fs);
  double update(double sample);
  size_t window_samples() const { return ring_.size(); }

 private:
  std::vector<double> ring_;
  size_t head_ = 0;
  size_t filled_ = 0;
};

/// One step of first-order activation dynamics towards
/// u = clamp(envelope / mvc_reference, 0, 1), clamped to [0, 1].
double activation(double envelope_value, const HillParams& params, double prev_a, double dt);

/// F = a * f_max * fl_factor * fv_factor.
double hill_force(double a, const HillParams& params);

/// Schmitt trigger on |yaw|: on at |yaw| >= threshold, off at
/// |yaw| <= threshold - hysteresis, otherwise unchanged.
bool motion_gate(double yaw, double threshold, double hysteresis, bool prev_state);

class MotionGate {
 public:
  /// Throws BadModel unless threshold > hysteresis >= 0.
  MotionGate(double threshold, double hysteresis, bool initial = false);
  bool update(double yaw);
  bool state() const { return on_; }

 private:
  double threshold_;
  double hysteresis_;
  bool on_;
};

/// Upward equilibrium shift in metres; exactly zero while the gate is off.
double map_to_equilibrium(double f_muscle, bool gate, double gain);

struct PipelineConfig {
  double f_lo = 20.0;
  double f_hi = 450.0;
  double window = 0.1;  // s
  HillParams hill;
  double gate_threshold = 0.3;   // rad
  double gate_hysteresis = 0.05; // rad
  double gain = 1e-3;            // m/N
};

struct PipelineRow {
  double t = 0.0;
  double envelope = 0.0;
  double activation = 0.0;
  double force_n = 0.0;
  bool gate = false;
  double dxeq_m = 0.0;
};

/// Runs one channel through the whole chain. Motion samples are merged by
/// timestamp with a zero-order hold; without a motion stream the gate is held
/// on. `t0` is the timestamp of the first EMG sample.
std::vector<PipelineRow> run_pipeline(const std::vector<double>& samples, double fs, double t0,
                                      const std::optional<std::vector<MotionSample>>& motion,
                                      const PipelineConfig& config);

/// Reads `t,ch1[,ch2...]`; fs is recovered from the (uniform) time column.
EmgTrace read_trace_csv(const std::string& path, double* t0 = nullptr);
/// Reads `t,yaw_rad`.
std::vector<MotionSample> read_motion_csv(const std::string& path);
void write_trace_csv(const std::string& path, const EmgTrace& trace, double t0 = 0.0);
void write_pipeline_csv(const std::string& path, const std::vector<PipelineRow>& rows);

}  // namespace superlimb
