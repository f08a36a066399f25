#pragma once

#include <string>
#include <vector>

#include "msgate/types.hpp"

namespace msgate {

// Omega^2 / (2 Delta^2); any consistent frequency unit.
double crosstalk_estimate(double omega, double delta);

struct ShapedCrosstalk {
  double time_averaged = 0.0;  // mean excited population over the pulse
  double residual = 0.0;       // excited population left after the pulse
};

// Two-level atom, H = Omega(t)/2 sigma_x - delta/2 sigma_z, with a sin^2 ramp
// up over t_w, hold t_h, and sin^2 ramp down over t_w. Frequencies in Hz, times in s.
ShapedCrosstalk shaped_pulse_crosstalk(double omega_max, double delta, double t_w, double t_h);

enum class OperationClass { Idle, Hadamard, Pi8Z, TwoQubit };
std::string to_string(OperationClass c);
OperationClass operation_class_from_string(const std::string& s);

struct ZoneSpec {
  std::string id;
  OperationClass operation = OperationClass::Idle;
  double offset_field = 0.0;   // G
  double gradient = 0.0;       // T/m
  std::vector<double> ion_positions;  // m, within the zone
};

struct ZonePlanOptions {
  double zeeman_slope = 1.4e6;  // Hz/G, first order for the g_F = 1 states
  double base_frequency = 0.0;  // |+1> transition frequency at zero offset, Hz
};

struct ZoneFrequency {
  std::string id;
  double frequency = 0.0;        // Hz
  double min_separation = 0.0;   // to any other zone, Hz; 0 if alone
  std::string nearest_zone;
};

struct ZonePlan {
  std::vector<ZoneFrequency> zones;
  double field_range = 0.0;  // G
  // Pairwise |f_i - f_j| in zone order, i < j.
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> separations;
};

ZonePlan zone_frequency_plan(const std::vector<ZoneSpec>& zones, const ZonePlanOptions& opt = {});

// Idle, Hadamard, pi/8 and two-qubit zones at 0, step, 2 step, 3 step gauss.
std::vector<ZoneSpec> minimal_universal_zones(double step_gauss = 2.0, double gradient = 0.0);

struct CurrentRamp {
  std::vector<double> times;    // s
  std::vector<double> samples;  // G, quantized
  double quantization_step = 0.0;
  double max_quantization_error = 0.0;
};

// sin^2 ramp from b_start to b_start + dB sampled at dac_rate, quantized to
// dac_bits over [0, full_scale]. The last sample lands on the end time.
CurrentRamp current_ramp(double dB, double t_ramp, double dac_rate = 2e6, int dac_bits = 16,
                         double full_scale = 10.0, double b_start = 0.0);

enum class CrosstalkMethod { Analytic, ShapedNumerical };

struct CrosstalkField {
  std::string name;
  double rabi = 0.0;  // Hz
  // sin^2 shaping for the numerical method; t_w = 0 is a square pulse
  double t_w = 0.0;
  double t_h = 0.0;
};

struct CrosstalkReport {
  CrosstalkMethod method = CrosstalkMethod::Analytic;
  Eigen::MatrixXd total;  // C_ij for a field resonant with ion i acting on ion j
  std::vector<std::pair<std::string, Eigen::MatrixXd>> per_field;
  double worst = 0.0;
};

// Transition frequencies (Hz) per ion; tones of different fields add.
CrosstalkReport crosstalk_report(const std::vector<double>& frequencies, const std::vector<CrosstalkField>& fields,
                                 CrosstalkMethod method = CrosstalkMethod::Analytic);

}  // namespace msgate
