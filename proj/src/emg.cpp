#include "superlimb/emg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "superlimb/csv.hpp"
#include "superlimb/error.hpp"

namespace superlimb {

void EmgTrace::validate() const {
  if (!(fs > 0.0) || !std::isfinite(fs)) {
    throw Error(ErrorCode::DimensionMismatch, "sampling rate must be positive");
  }
  for (const auto& ch : channels) {
    if (ch.samples.size() != length()) {
      throw Error(ErrorCode::DimensionMismatch, "channel '" + ch.name + "' has a different length");
    }
    for (double v : ch.samples) {
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "channel '" + ch.name + "' has non-finite samples");
    }
  }
}

void HillParams::validate() const {
  if (!(f_max > 0.0)) throw Error(ErrorCode::BadModel, "hill.f_max must be positive");
  if (!(act_tau_rise > 0.0) || !(act_tau_fall > 0.0)) {
    throw Error(ErrorCode::BadModel, "activation time constants must be positive");
  }
  if (!(mvc_reference > 0.0)) throw Error(ErrorCode::BadModel, "hill.mvc_reference must be positive");
  if (!(fl_factor > 0.0 && fl_factor <= 1.5) || !(fv_factor > 0.0 && fv_factor <= 1.5)) {
    throw Error(ErrorCode::BadModel, "force-length/velocity factors must lie in (0, 1.5]");
  }
}

BiquadCoefficients bandpass_design(double f_lo, double f_hi, double fs) {
  if (!(f_lo > 0.0) || !(f_hi > f_lo) || !(f_hi < 0.5 * fs)) {
    throw Error(ErrorCode::BadBand, "need 0 < f_lo < f_hi < fs/2, got " + std::to_string(f_lo) +
                                        ", " + std::to_string(f_hi) + " at fs " + std::to_string(fs));
  }
  const double f0 = std::sqrt(f_lo * f_hi);
  const double q = f0 / (f_hi - f_lo);
  const double w0 = 2.0 * std::numbers::pi * f0 / fs;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  return {alpha / a0, 0.0, -alpha / a0, -2.0 * std::cos(w0) / a0, (1.0 - alpha) / a0};
}

namespace {

void filter_in_place(std::vector<double>& x, const BiquadCoefficients& c) {
  double z1 = 0.0, z2 = 0.0;  // transposed direct form II
  for (double& v : x) {
    const double in = v;
    const double out = c.b0 * in + z1;
    z1 = c.b1 * in - c.a1 * out + z2;
    z2 = c.b2 * in - c.a2 * out;
    v = out;
  }
}

template <typename Fn>
EmgTrace map_channels(const EmgTrace& trace, Fn&& fn) {
  trace.validate();
  EmgTrace out;
  out.fs = trace.fs;
  for (const auto& ch : trace.channels) out.channels.push_back({ch.name, fn(ch.samples)});
  return out;
}

}  // namespace

std::vector<double> bandpass(const std::vector<double>& x, double f_lo, double f_hi, double fs) {
  const BiquadCoefficients c = bandpass_design(f_lo, f_hi, fs);
  std::vector<double> y = x;
  filter_in_place(y, c);
  std::reverse(y.begin(), y.end());
  filter_in_place(y, c);
  std::reverse(y.begin(), y.end());
  return y;
}

EmgTrace bandpass(const EmgTrace& trace, double f_lo, double f_hi) {
  bandpass_design(f_lo, f_hi, trace.fs);
  return map_channels(trace, [&](const std::vector<double>& x) { return bandpass(x, f_lo, f_hi, trace.fs); });
}

EmgTrace rectify(const EmgTrace& trace) {
  return map_channels(trace, [](const std::vector<double>& x) {
    std::vector<double> y(x.size());
    std::transform(x.begin(), x.end(), y.begin(), [](double v) { return std::abs(v); });
    return y;
  });
}

RmsEnvelope::RmsEnvelope(double window, double fs) {
  if (!(fs > 0.0) || !(window >= 2.0 / fs)) {
    throw Error(ErrorCode::BadWindow, "envelope window must be at least two samples");
  }
  ring_.assign(static_cast<size_t>(std::llround(window * fs)), 0.0);
}

double RmsEnvelope::update(double sample) {
  ring_[head_] = sample * sample;
  head_ = (head_ + 1) % ring_.size();
  filled_ = std::min(filled_ + 1, ring_.size());
  double sum = 0.0;
  for (size_t i = 0; i < filled_; ++i) sum += ring_[i];
  return std::sqrt(sum / static_cast<double>(filled_));
}

std::vector<double> envelope(const std::vector<double>& x, double window, double fs) {
  RmsEnvelope env(window, fs);
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = env.update(x[i]);
  return y;
}

EmgTrace envelope(const EmgTrace& trace, double window) {
  RmsEnvelope probe(window, trace.fs);
  return map_channels(trace, [&](const std::vector<double>& x) { return envelope(x, window, trace.fs); });
}

double activation(double envelope_value, const HillParams& params, double prev_a, double dt) {
  const double u = std::clamp(envelope_value / params.mvc_reference, 0.0, 1.0);
  const double tau = u > prev_a ? params.act_tau_rise : params.act_tau_fall;
  return std::clamp(prev_a + dt / tau * (u - prev_a), 0.0, 1.0);
}

double hill_force(double a, const HillParams& params) {
  return a * params.f_max * params.fl_factor * params.fv_factor;
}

bool motion_gate(double yaw, double threshold, double hysteresis, bool prev_state) {
  const double mag = std::abs(yaw);
  if (mag >= threshold) return true;
  if (mag <= threshold - hysteresis) return false;
  return prev_state;
}

MotionGate::MotionGate(double threshold, double hysteresis, bool initial)
    : threshold_(threshold), hysteresis_(hysteresis), on_(initial) {
  if (!(hysteresis >= 0.0) || !(threshold > hysteresis)) {
    throw Error(ErrorCode::BadModel, "gate needs threshold > hysteresis >= 0");
  }
}

bool MotionGate::update(double yaw) {
  on_ = motion_gate(yaw, threshold_, hysteresis_, on_);
  return on_;
}

double map_to_equilibrium(double f_muscle, bool gate, double gain) {
  return gate ? gain * f_muscle : 0.0;
}

std::vector<PipelineRow> run_pipeline(const std::vector<double>& samples, double fs, double t0,
                                      const std::optional<std::vector<MotionSample>>& motion,
                                      const PipelineConfig& config) {
  config.hill.validate();
  if (!(config.gain >= 0.0)) throw Error(ErrorCode::BadModel, "mapping gain must be nonnegative");
  MotionGate gate(config.gate_threshold, config.gate_hysteresis, !motion.has_value());
  RmsEnvelope env(config.window, fs);

  const std::vector<double> filtered = bandpass(samples, config.f_lo, config.f_hi, fs);
  const double dt = 1.0 / fs;
  std::vector<PipelineRow> rows;
  rows.reserve(samples.size());
  size_t next_motion = 0;
  double a = 0.0;
  for (size_t i = 0; i < filtered.size(); ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    if (motion) {
      while (next_motion < motion->size() && (*motion)[next_motion].t <= t + 1e-12) {
        gate.update((*motion)[next_motion].yaw);
        ++next_motion;
      }
    }
    PipelineRow row;
    row.t = t;
    row.envelope = env.update(std::abs(filtered[i]));
    a = activation(row.envelope, config.hill, a, dt);
    row.activation = a;
    row.force_n = hill_force(a, config.hill);
    row.gate = gate.state();
    row.dxeq_m = map_to_equilibrium(row.force_n, row.gate, config.gain);
    rows.push_back(row);
  }
  return rows;
}

EmgTrace read_trace_csv(const std::string& path, double* t0) {
  const csv::Table table = csv::read(path);
  if (table.header.size() < 2 || table.header.front() != "t") {
    throw ParseError(path, "trace header must be t,ch1[,ch2,...]");
  }
  const auto& t = table.columns.front();
  if (t.size() < 2) throw ParseError(path, "trace needs at least two samples");
  const double step = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(step > 0.0)) throw ParseError(path, "time column must increase");
  for (size_t i = 1; i < t.size(); ++i) {
    if (std::abs((t[i] - t[i - 1]) - step) > 1e-3 * step) {
      throw ParseError(path + ":t", "samples must be uniformly spaced");
    }
  }
  EmgTrace trace;
  trace.fs = 1.0 / step;
  for (size_t c = 1; c < table.header.size(); ++c) {
    trace.channels.push_back({table.header[c], table.columns[c]});
  }
  trace.validate();
  if (t0 != nullptr) *t0 = t.front();
  return trace;
}

std::vector<MotionSample> read_motion_csv(const std::string& path) {
  const csv::Table table = csv::read(path);
  const auto& t = table.column("t");
  const auto& yaw = table.column("yaw_rad");
  std::vector<MotionSample> out;
  out.reserve(t.size());
  for (size_t i = 0; i < t.size(); ++i) {
    if (i > 0 && t[i] < t[i - 1]) throw ParseError(path + ":t", "motion timestamps must not decrease");
    out.push_back({t[i], yaw[i]});
  }
  return out;
}

void write_trace_csv(const std::string& path, const EmgTrace& trace, double t0) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::MissingFile, "cannot write '" + path + "'");
  std::vector<std::string> fields{"t"};
  for (const auto& ch : trace.channels) fields.push_back(ch.name);
  csv::write_row(out, fields);
  for (size_t i = 0; i < trace.length(); ++i) {
    fields.clear();
    fields.push_back(csv::format_number(t0 + static_cast<double>(i) / trace.fs));
    for (const auto& ch : trace.channels) fields.push_back(csv::format_number(ch.samples[i]));
    csv::write_row(out, fields);
  }
}

void write_pipeline_csv(const std::string& path, const std::vector<PipelineRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::MissingFile, "cannot write '" + path + "'");
  csv::write_row(out, {"t", "envelope", "activation", "force_n", "gate", "dxeq_m"});
  for (const auto& r : rows) {
    csv::write_row(out, {csv::format_number(r.t), csv::format_number(r.envelope),
                         csv::format_number(r.activation), csv::format_number(r.force_n),
                         r.gate ? "1" : "0", csv::format_number(r.dxeq_m)});
  }
}

}  // namespace superlimb
