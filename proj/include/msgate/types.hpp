#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace msgate {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Configs carry frequencies f such that the angular frequency is 2*pi*f.
constexpr double angular(double hz) { return kTwoPi * hz; }
constexpr double hertz(double rad_per_s) { return rad_per_s / kTwoPi; }

namespace constants {
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double planck = 6.62607015e-34;     // J s
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J/T
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double epsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double amu = 1.66053906660e-27;      // kg
inline constexpr double yb171_mass = 170.9363258 * amu;
}  // namespace constants

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or evaluation at/near a declared pole.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Population left in the top Fock level (or thermal tail) exceeds the threshold.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Operands carry different frame/basis tags.
class FrameMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace msgate
