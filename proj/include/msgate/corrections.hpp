#pragma once

#include <array>
#include <string>
#include <vector>

#include "msgate/models.hpp"

namespace msgate {

// All formulas are homogeneous of degree one in frequency, so inputs and outputs
// are in Hz unless noted. Each function raises DomainError within a relative
// guard band (1e-3) of its poles.
inline constexpr double kPoleGuard = 1e-3;

// (eta W0)^2/2 [1/(W/sqrt2 - delta) + 1/(W/sqrt2 + delta)]
double rf_gate_lightshift(double eta, double omega0, double omega_mw, double delta);
// (eta W0)^2/2 [1/(W/sqrt2 - delta) - 1/(W/sqrt2 + delta)]
double rf_leakage(double eta, double omega0, double omega_mw, double delta);

struct MwLeakage {
  double g = 0.0;           // -eta^2 nu^3 / (2 (W^2/2 - nu^2))
  double lightshift = 0.0;  // -2 g, on |D><D|
};
MwLeakage mw_leakage(double eta, double nu, double omega_mw);

// (eta W0)^2/8 [1/(W/sqrt2 - Delta) - 1/(W/sqrt2 + Delta)], multiplying (2n+1)|0'><0'|.
double phonon_lightshift(double eta, double omega0, double omega_mw, double Delta_i);

// Shifts from the off-resonant |0'> <-> |-1> carrier:
//   c_qubit (|D><D| - |0'><0'|) + c_bright |0'><0'|
struct RfMinus1Shift {
  double qubit = 0.0;
  double zero_prime = 0.0;
  // Net shift of |0'> relative to |D>.
  double splitting() const { return zero_prime - 2.0 * qubit; }
};
RfMinus1Shift rf_minus1_shift(double omega0, double nu, double omega_mw, double Delta_i);
// Coefficient of (|D><D| - |0'><0'|) in the small-Delta limit: -3 W0^2 Delta / (4 nu^2).
double rf_minus1_shift_approx(double omega0, double nu, double Delta_i);

struct ZeemanTerms {
  double Delta_Z = 0.0;          // m
  double Delta_B = 0.0;          // Hz
  double mw_zeeman_shift = 0.0;  // W^2 / (4 Delta_B), Hz
  double rf_zeeman_shift = 0.0;  // Delta W0^2 / (Delta_B^2 - nu^2), Hz
};
// Delta_Z = (e^2 / (2 pi eps0 M nu_z^2))^(1/3), Delta_B = mu_B dB/dz Delta_Z / h (g_F = 1).
ZeemanTerms zeeman_terms(const PhysicalParams& p, double omega_mw, double Delta = 0.0);

// 1 + W^2 / (2 nu^2 - W^2)
double gate_duration_factor(double omega_mw, double nu);

struct ImbalanceFactor {
  double factor = 0.0;
  bool above_typical = false;  // factor > 1e-4
};
ImbalanceFactor imbalance_dephasing(double delta_omega, double omega_mw);

// 4 W0^2 / nu^2
double carrier_infidelity(double omega0, double nu);

struct CorrectionCoefficients {
  double omega_mw = 0.0;  // value used in the formulas
  double g_rf_shift = 0.0;
  double g_rf_leak = 0.0;
  double g_mw_leak = 0.0;
  double mw_lightshift = 0.0;
  std::array<double, 2> g_ph{};
  std::array<RfMinus1Shift, 2> rf_minus1{};
  double mw_zeeman_shift = 0.0;
  std::array<double, 2> rf_zeeman_shift{};
  double gate_factor = 0.0;  // W^2 / (2 nu^2 - W^2)
  std::array<double, 2> imbalance_dephasing_factor{};
  double carrier_infidelity = 0.0;
};

// omega_mw <= 0 selects the mean of the two dressing Rabi frequencies.
CorrectionCoefficients correction_coefficients(const PhysicalParams& p, double omega_mw = 0.0,
                                               std::array<double, 2> dressing_imbalance = {0.0, 0.0});

struct CompensationOffsets {
  std::array<double, 2> zero_prime_shift{};  // |0'> relative to |D|, Hz
  std::array<double, 2> tone_offset{};       // added to both RF tones, Hz
};
// `modelled_only` keeps the terms the transformed-frame model reproduces
// (g_rf_shift and the mw lightshift) and drops the |-1> carrier and Zeeman shifts.
CompensationOffsets compensation_offsets(const CorrectionCoefficients& c, bool modelled_only = false);

// Name/value rows for reports.
std::vector<std::pair<std::string, double>> correction_table(const CorrectionCoefficients& c);

}  // namespace msgate
