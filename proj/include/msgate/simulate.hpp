#pragma once

#include <array>
#include <string>
#include <vector>

#include "msgate/integrate.hpp"
#include "msgate/models.hpp"
#include "msgate/noise.hpp"

namespace msgate {

// Qubit labels: down = |0'>, up = |D>. Two-qubit index 2*q1 + q2.
enum class CodeState { UpUp = 3, UpDown = 2, DownUp = 1, DownDown = 0 };

// 4x4 exp(i theta sigma_y1 sigma_y2) on {down, up}^2.
Matrix ms_unitary(double theta = kPi / 4.0);

enum class NoiseMethod { Auto, Lindblad, WeakNoise };

struct GateTiming {
  PulseEnvelope envelope;
  double delta = 0.0;           // Hz
  double gate_time = 0.0;       // s
  double residual_alpha = 0.0;  // |alpha(T)| of the phase-space loop
  double phase = 0.0;           // accumulated two-qubit phase (pi/4 targeted)
};

// Loop closure for H = S (beta a^dagger + h.c.), beta = i(eta W0/2) f(t) e^{-i delta t}:
// picks the hold time so that alpha(T) = int beta dt vanishes near 2pi/delta.
// With `tune_detuning` delta is also rescaled so the phase equals pi/4.
GateTiming plan_gate_timing(const PhysicalParams& p, EnvelopeShape shape, double t_ramp, bool tune_detuning);

struct GateSettings {
  Frame frame = Frame::Effective;
  int n_cut = 10;
  double nbar = 0.0;
  EnvelopeShape shape = EnvelopeShape::Rectangular;
  double t_ramp = 0.0;
  // Gate length from loop closure when true; else `gate_time` is used as the total duration.
  bool auto_timing = true;
  bool tune_detuning = false;
  double gate_time = 0.0;
  LambDickeOrder order = LambDickeOrder::Exact;
  std::array<double, 2> compensation{0.0, 0.0};  // Hz, added to both RF tones of each ion
  bool rf_enabled = true;
  std::size_t time_points = 201;
  CodeState initial = CodeState::DownDown;
  NoiseMethod noise_method = NoiseMethod::Auto;
  std::size_t weak_noise_grid = 0;  // 0: eight points per fastest period
  int weak_noise_phonons = 3;       // target Fock levels 0..k in the weak-noise projector
  std::size_t b_noise_shots = 64;
  double truncation_threshold = 1e-6;
  IntegratorOptions integrator{};
};

struct GateResult {
  std::vector<double> times;
  std::vector<double> p_upup;
  std::vector<double> p_downdown;
  std::vector<double> p_mixed;  // P(up,down) + P(down,up)
  std::vector<double> p_leak;   // outside {0', D}^2
  QuantumState final_state = QuantumState::pure(Vector::Ones(1));
  Matrix qubit_density;          // 4x4, traced over motion, unnormalized, in the tone frame
  double bell_fidelity = 0.0;    // <target| rho |target>, target = U_MS |initial>
  double coherent_fidelity = 0.0;
  double noise_correction = 0.0;  // weak-noise correction, 0 otherwise
  double truncation_leakage = 0.0;
  double gate_time = 0.0;
  double delta = 0.0;
  std::string method;
  std::vector<std::string> warnings;
};

GateResult simulate_gate(const PhysicalParams& p, const GateSettings& s, const NoiseModel& noise = {});

// Gate run for each code state; process fidelity is the mean.
struct CodeSpaceResult {
  std::array<double, 4> fidelity{};  // order DD, D0', 0'D, 0'0'
  std::array<double, 4> leakage{};
  double gate_time = 0.0;
  double mean() const { return (fidelity[0] + fidelity[1] + fidelity[2] + fidelity[3]) / 4.0; }
};
CodeSpaceResult simulate_code_space(const PhysicalParams& p, const GateSettings& s, const NoiseModel& noise = {});

// Ideal analysis pulses exp(-i pi/4 (cos phi X + sin phi Y)) on both qubits,
// then parity <Z Z> of the 4x4 qubit density (normalized over the code space).
double parity_after_analysis(const Matrix& rho_qubits, double phi);

struct ParityScan {
  std::vector<double> phi;
  std::vector<double> parity;
  GateResult gate;
};
ParityScan simulate_parity_scan(const PhysicalParams& p, const GateSettings& s, const NoiseModel& noise,
                                const std::vector<double>& phi_grid);

struct CoolingSchedule {
  std::vector<double> pulse_durations;  // s
  double carrier_rabi = 74e3;           // Hz
};

// Red-sideband pi times for target Fock levels from n_max down to 1,
// log-spaced over `repetitions` pulses (durations increase).
CoolingSchedule default_cooling_schedule(const PhysicalParams& p, int repetitions = 500, int n_max = 60,
                                       double carrier_rabi = 74e3);

struct CoolingResult {
  std::vector<double> nbar;                        // before the first and after each repetition
  std::vector<std::vector<double>> distributions;  // matching phonon distributions
  double final_nbar() const { return nbar.back(); }
};

// One ion {0, +1} with the first-order red sideband; optical repumping resets
// the spin to |0> while keeping the phonon state.
CoolingResult simulate_sideband_cooling(const PhysicalParams& p, const CoolingSchedule& schedule, double initial_nbar,
                                        int n_cut);

}  // namespace msgate
