#pragma once

#include <array>
#include <string>
#include <vector>

#include "msgate/hamiltonian.hpp"
#include "msgate/space.hpp"

namespace msgate {

// Experiment constants. Frequencies are in Hz (angular = 2*pi*value).
struct PhysicalParams {
  double nu_z = 0.0;      // axial COM frequency
  double nu_s = 0.0;      // stretch frequency, sqrt(3) * nu_z
  double gradient = 0.0;  // dB/dz, T/m
  double eta = 0.0;       // eta_1 = -eta_2
  double omega_0 = 0.0;   // engineered-qubit Rabi frequency
  double omega_rf = 0.0;  // sqrt(2) * omega_0
  double omega_mw1 = 0.0;
  double omega_mw2 = 0.0;
  double delta = 0.0;            // gate detuning
  double dressing_detune = 0.0;  // common detuning of the |0> level
  double Delta1 = 0.0;           // second-order Zeeman splittings w+ - w-
  double Delta2 = 0.0;
  double Delta_B = 0.0;  // inter-ion Zeeman difference
  double zeeman1 = 0.0;  // first-order splittings
  double zeeman2 = 0.0;
  double mass = constants::yb171_mass;
  double clock_split = 0.0;  // clock frequency difference ion 2 - ion 1
  double clock_frequency = 12.642812118e9;  // |0'> -> |0> hyperfine splitting

  double delta0() const { return omega_mw1 - omega_mw2; }
  double omega_mw_mean() const { return 0.5 * (omega_mw1 + omega_mw2); }
  double nu() const { return nu_s; }

  // z0 mu_B dB/dz / (sqrt2 hbar nu_s) with z0 = sqrt(hbar / (2 m nu_s)).
  double eta_from_gradient() const;

  // Throws DomainError naming the first violated invariant.
  void validate() const;

  static PhysicalParams demonstrated();
  static PhysicalParams improved();
};

enum class EnvelopeShape { Rectangular, Sin2Ramp };

struct PulseEnvelope {
  EnvelopeShape shape = EnvelopeShape::Rectangular;
  double t_ramp = 0.0;
  double t_hold = 0.0;

  double duration() const { return 2.0 * t_ramp + t_hold; }
  // 0 outside [0, duration]; sin^2 rise and fall when shape is Sin2Ramp.
  double value(double t) const;

  static PulseEnvelope rectangular(double duration);
  static PulseEnvelope sin2(double t_ramp, double t_hold);
};

enum class Sideband { Carrier, Red, Blue };

std::string to_string(Sideband s);

// One applied tone driving |to> <-> |from> on `ion`. Its angular offset from
// the bare transition is  s * nu + detuning  with s = -1, 0, +1 for red, carrier,
// blue. A red tone at w+ - (nu + delta) therefore has detuning = -delta.
struct DriveField {
  int ion = 0;
  std::string from_level = "0'";
  std::string to_level = "+1";
  double rabi = 0.0;       // Hz
  double detuning = 0.0;   // Hz
  Sideband sideband = Sideband::Carrier;
  double phase = 0.0;
  PulseEnvelope envelope{};

  // Angular tone offset (rad/s) given the mode frequency (Hz).
  double offset(double nu_hz) const;
};

enum class LambDickeOrder { Exact, First };

struct ModelOptions {
  LambDickeOrder order = LambDickeOrder::Exact;
  // Scale of the -nu X^2 term in the transformed frame (1 = as derived).
  double gradient_shift_scale = 1.0;
  // Per-ion imbalance dOmega = Omega+ - Omega- of the two dressing tones (Hz).
  std::array<double, 2> dressing_imbalance{0.0, 0.0};
  // Quasi-static shift of |+1> (+b) and |-1> (-b), Hz, common to both ions.
  double zeeman_offset = 0.0;
};

// RF gate tones: red and blue on |0'> -> |+1> of each ion with Rabi Omega_rf,
// tones offset by +-(nu + delta) + compensation[i].
std::vector<DriveField> gate_drives(const PhysicalParams& p, const PulseEnvelope& env,
                                    std::array<double, 2> compensation_hz = {0.0, 0.0});

// -w0|0><0| - w-|-1><-1| + w+|+1><+1| per ion relative to |0'>. The
// level energies come from the clock frequency and first-order/second-order
// Zeeman inputs; the result is in rad/s.
OperatorMatrix h_internal(const PhysicalParams& p, const Space& space);

// nu sum_i eta_i (a^dagger + a) sigma_zi, eta_2 = -eta_1.
OperatorMatrix h_gradient_coupling(const PhysicalParams& p, const Space& space);

// exp(sum_i eta_i (a^dagger - a) sigma_zi).
OperatorMatrix polaron_transform(const PhysicalParams& p, const Space& space);

// Jaynes-Cummings term on ion 1, |0> <-> |+1>, in the interaction picture:
//   blue:  (eta W/2)(|+1><0| a^dagger e^{-i delta t} + h.c.)
//   red:  -(eta W/2)(|+1><0| a e^{-i delta t} + h.c.)
// omega_mw and delta in Hz.
TimeDependentHamiltonian h_sideband_mw(const PhysicalParams& p, const Space& space, Sideband which,
                                       double omega_mw, double delta);

// (W_i/2)(|0><+1| + |0><-1| + h.c.) per ion plus dressing_detune |0><0|.
// With `displaced` the couplings carry the polaron displacement factors of the
// transformed frame.
OperatorMatrix h_dressing(const PhysicalParams& p, const Space& space, const ModelOptions& opt = {},
                          bool displaced = false);

// Transformed frame: nu a^dagger a - nu X^2 + displaced dressing + displaced
// drives, X = sum_i eta_i sigma_zi. The nu a^dagger a part is carried as the
// interaction-picture diagonal.
TimeDependentHamiltonian h_full_gate(const PhysicalParams& p, const Space& space,
                                     const std::vector<DriveField>& drives,
                                     const ModelOptions& opt = {});

// Bare rotating frame (RWA at the hyperfine carriers only): nu a^dagger a +
// gradient coupling + dressing + drives without displacement factors.
TimeDependentHamiltonian h_bare_gate(const PhysicalParams& p, const Space& space,
                                     const std::vector<DriveField>& drives,
                                     const ModelOptions& opt = {});

// Effective frame on levels {0', D}:
//   -(eta W0/2)(|D><0'|_1 - |0'><D|_1 - |D><0'|_2 + |0'><D|_2)(a e^{i delta t} - a^dagger e^{-i delta t})
// scaled by the envelope.
TimeDependentHamiltonian h_effective_gate(const PhysicalParams& p, const Space& space,
                                          const PulseEnvelope& env);

// True when delta << W_mw/sqrt2 << nu holds with the given margin factor.
bool effective_regime_ok(const PhysicalParams& p, double margin = 3.0);

}  // namespace msgate
