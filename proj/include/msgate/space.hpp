#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "msgate/types.hpp"

namespace msgate {

// Picture in which an operator or state is written.
//   BareRotating: rotating at the drive carriers, before the polaron transform.
//   Transformed:  after the spin-dependent displacement (polaron) transform.
//   Effective:    Molmer-Sorensen frame on the {0', D} qubits.
enum class Frame { BareRotating, Transformed, Effective };

// Which single-ion basis the level indices refer to.
enum class LevelBasis { Bare, Dressed };

struct BasisTag {
  Frame frame = Frame::BareRotating;
  LevelBasis levels = LevelBasis::Bare;

  bool operator==(const BasisTag&) const = default;
};

std::string to_string(Frame frame);
std::string to_string(const BasisTag& tag);

struct HilbertConfig {
  std::vector<std::string> ion_levels{"0", "0'", "-1", "+1"};
  int n_cut = 0;
  int ion_count = 2;
};

// Composite space ion_1 (x) ion_2 (x) boson.
//
// Flat index ordering: ion 1 slowest, ion 2 next, Fock number fastest, i.e.
//   index = (l1 * L + l2) * (n_cut + 1) + n
// for two ions with L levels each. States serialized with this ordering are
// portable between runs and tools.
class Space {
 public:
  struct Coordinates {
    std::array<int, 2> level{0, 0};
    int n = 0;

    bool operator==(const Coordinates&) const = default;
  };

  explicit Space(HilbertConfig config);

  const HilbertConfig& config() const { return config_; }
  int ion_count() const { return config_.ion_count; }
  int levels_per_ion() const { return static_cast<int>(config_.ion_levels.size()); }
  int n_cut() const { return config_.n_cut; }
  int boson_dim() const { return config_.n_cut + 1; }
  int spin_dim() const { return spin_dim_; }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& levels() const { return config_.ion_levels; }

  // Throws DomainError for an unknown label.
  int level_index(std::string_view label) const;
  bool has_level(std::string_view label) const;

  std::size_t flat_index(const Coordinates& c) const;
  Coordinates coordinates(std::size_t index) const;

  // Single-ion operator on `ion`, identity on the other ion and the boson.
  Matrix embed_ion(int ion, const Matrix& single_ion) const;
  // Single-ion operator on `ion` times a boson operator.
  Matrix embed_ion_boson(int ion, const Matrix& single_ion, const Matrix& boson) const;
  // Spin-space operator (dimension spin_dim) times a boson operator.
  Matrix embed_spin_boson(const Matrix& spin, const Matrix& boson) const;
  Matrix embed_boson(const Matrix& boson) const;
  Matrix identity() const;

  // |levels[0], levels[1], n>
  Vector basis_vector(std::span<const int> levels, int n) const;
  // Product of single-ion vectors and a Fock state.
  Vector product_vector(std::span<const Vector> ion_vectors, int n) const;

 private:
  HilbertConfig config_;
  int spin_dim_ = 1;
  std::size_t dim_ = 0;
};

Space build_space(const HilbertConfig& config);

class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(Matrix m, BasisTag tag) : m_(std::move(m)), tag_(tag) {}

  const Matrix& matrix() const { return m_; }
  BasisTag basis() const { return tag_; }
  Eigen::Index dim() const { return m_.rows(); }

  OperatorMatrix adjoint() const { return {m_.adjoint(), tag_}; }

  // ||A - A^dagger||_F / ||A||_F (0 for the zero operator).
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }
  // ||A A^dagger - 1||_F
  double unitarity_defect() const;

  OperatorMatrix& operator+=(const OperatorMatrix& other);
  OperatorMatrix& operator-=(const OperatorMatrix& other);
  OperatorMatrix& operator*=(cplx s);

  friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
  friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
  friend OperatorMatrix operator*(OperatorMatrix a, cplx s) { return a *= s; }
  friend OperatorMatrix operator*(cplx s, OperatorMatrix a) { return a *= s; }
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

 private:
  Matrix m_;
  BasisTag tag_{};
};

void require_same_basis(const BasisTag& a, const BasisTag& b);

class QuantumState {
 public:
  enum class Kind { Pure, Density };

  // Both factories validate: pure states need unit norm (1e-10); density
  // matrices must be Hermitian, trace one and PSD to a -1e-10 eigenvalue floor.
  static QuantumState pure(Vector psi, BasisTag tag = {}, double tol = 1e-10);
  static QuantumState density(Matrix rho, BasisTag tag = {}, double tol = 1e-10);

  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::Pure; }
  BasisTag basis() const { return tag_; }
  std::size_t dim() const { return static_cast<std::size_t>(data_.rows()); }

  const Vector& vector() const;  // throws for density matrices
  Matrix density_matrix() const;
  double trace() const;

 private:
  QuantumState(Kind kind, Matrix data, BasisTag tag) : kind_(kind), data_(std::move(data)), tag_(tag) {}

  Kind kind_ = Kind::Pure;
  Matrix data_;
  Vector vec_;
  BasisTag tag_{};
};

// Annihilation and creation operators of the boson factor.
std::pair<OperatorMatrix, OperatorMatrix> ladder_ops(const Space& space, BasisTag tag = {});
OperatorMatrix number_op(const Space& space, BasisTag tag = {});

// Truncated single-mode matrices of dimension n_cut + 1.
Matrix boson_annihilation(int n_cut);
// exp(alpha (a^dagger - a)) computed as a matrix exponential in the truncated space.
Matrix displacement(int n_cut, double alpha);

// |to><from| on `ion`, identity elsewhere.
OperatorMatrix transition_op(const Space& space, int ion, std::string_view from_level,
                             std::string_view to_level, BasisTag tag = {});
// |+1><+1| - |-1><-1| on `ion`.
OperatorMatrix sigma_z(const Space& space, int ion, BasisTag tag = {});

// Single-ion change of basis whose columns are the dressed vectors written in the
// bare basis. Slots keep their positions: 0 -> u, -1 -> d, +1 -> D, 0' -> 0'.
//   |u> = |+1>/2 + |-1>/2 + |0>/sqrt2
//   |d> = |+1>/2 + |-1>/2 - |0>/sqrt2
//   |D> = (|+1> - |-1>)/sqrt2
// Bare coordinates psi map to dressed coordinates by U^dagger psi.
Matrix dressed_single_ion(const std::vector<std::string>& levels);
std::vector<std::string> dressed_labels(const std::vector<std::string>& bare_levels);
OperatorMatrix dressed_transform(const Space& space, int ion);
// Both ions transformed.
OperatorMatrix dressed_transform_all(const Space& space);

// Single-ion qubit vectors {|0'>, |D>} written in the space's level basis.
// Works for bare {0,0',-1,+1} levels and for reduced {0',D} levels.
std::pair<Vector, Vector> qubit_vectors(const Space& space);

struct ThermalDistribution {
  std::vector<double> probabilities;  // renormalized over 0..n_cut
  double leakage = 0.0;               // weight of n > n_cut before renormalization
};

// Geometric distribution nbar^n / (1+nbar)^(n+1) truncated at n_cut.
ThermalDistribution thermal_distribution(double nbar, int n_cut);

// rho_spin (x) rho_thermal with the spin part given as one vector per ion.
// Throws TruncationError when the discarded tail exceeds max_leakage.
QuantumState thermal_state(const Space& space, double nbar, std::span<const Vector> ion_vectors,
                           double max_leakage = 1e-6, BasisTag tag = {});

// Population of Fock level n_cut (summed over spin) for a state.
double top_fock_population(const Space& space, const Matrix& state_or_rho);

}  // namespace msgate
