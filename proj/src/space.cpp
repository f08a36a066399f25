#include "msgate/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace msgate {

namespace {

constexpr std::size_t kMaxDim = 1u << 16;

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

}  // namespace

std::string to_string(Frame frame) {
  switch (frame) {
    case Frame::BareRotating:
      return "bare";
    case Frame::Transformed:
      return "transformed";
    case Frame::Effective:
      return "effective";
  }
  return "?";
}

std::string to_string(const BasisTag& tag) {
  return to_string(tag.frame) + (tag.levels == LevelBasis::Bare ? "/bare-levels" : "/dressed-levels");
}

Space::Space(HilbertConfig config) : config_(std::move(config)) {
  if (config_.ion_count != 1 && config_.ion_count != 2) {
    throw DomainError("ion_count must be 1 or 2");
  }
  if (config_.n_cut < 0) throw DomainError("n_cut must be non-negative");
  if (config_.ion_levels.empty()) throw DomainError("ion level list is empty");
  auto sorted = config_.ion_levels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("duplicate ion level label");
  }
  const std::size_t levels = config_.ion_levels.size();
  std::size_t spin = 1;
  for (int i = 0; i < config_.ion_count; ++i) spin *= levels;
  const std::size_t bosons = static_cast<std::size_t>(config_.n_cut) + 1;
  if (spin > kMaxDim || bosons > kMaxDim || spin * bosons > kMaxDim) {
    throw DomainError("Hilbert space dimension too large");
  }
  spin_dim_ = static_cast<int>(spin);
  dim_ = spin * bosons;
}

Space build_space(const HilbertConfig& config) { return Space(config); }

int Space::level_index(std::string_view label) const {
  const auto& lv = config_.ion_levels;
  auto it = std::find(lv.begin(), lv.end(), label);
  if (it == lv.end()) throw DomainError("unknown level label '" + std::string(label) + "'");
  return static_cast<int>(it - lv.begin());
}

bool Space::has_level(std::string_view label) const {
  const auto& lv = config_.ion_levels;
  return std::find(lv.begin(), lv.end(), label) != lv.end();
}

std::size_t Space::flat_index(const Coordinates& c) const {
  const int levels = levels_per_ion();
  std::size_t spin = 0;
  for (int i = 0; i < ion_count(); ++i) {
    if (c.level[i] < 0 || c.level[i] >= levels) throw DomainError("level index out of range");
    spin = spin * levels + static_cast<std::size_t>(c.level[i]);
  }
  if (c.n < 0 || c.n > n_cut()) throw DomainError("Fock index out of range");
  return spin * static_cast<std::size_t>(boson_dim()) + static_cast<std::size_t>(c.n);
}

Space::Coordinates Space::coordinates(std::size_t index) const {
  if (index >= dim_) throw DomainError("flat index out of range");
  Coordinates c;
  c.n = static_cast<int>(index % boson_dim());
  std::size_t spin = index / boson_dim();
  const int levels = levels_per_ion();
  for (int i = ion_count() - 1; i >= 0; --i) {
    c.level[i] = static_cast<int>(spin % levels);
    spin /= levels;
  }
  return c;
}

Matrix Space::embed_ion_boson(int ion, const Matrix& single_ion, const Matrix& boson) const {
  const int levels = levels_per_ion();
  if (ion < 0 || ion >= ion_count()) throw DomainError("ion index out of range");
  if (single_ion.rows() != levels || single_ion.cols() != levels) {
    throw DomainError("single-ion operator has wrong dimension");
  }
  if (boson.rows() != boson_dim() || boson.cols() != boson_dim()) {
    throw DomainError("boson operator has wrong dimension");
  }
  const Matrix id = Matrix::Identity(levels, levels);
  Matrix spin = single_ion;
  if (ion_count() == 2) spin = ion == 0 ? kron(single_ion, id) : kron(id, single_ion);
  return kron(spin, boson);
}

Matrix Space::embed_ion(int ion, const Matrix& single_ion) const {
  return embed_ion_boson(ion, single_ion, Matrix::Identity(boson_dim(), boson_dim()));
}

Matrix Space::embed_spin_boson(const Matrix& spin, const Matrix& boson) const {
  if (spin.rows() != spin_dim_ || boson.rows() != boson_dim()) {
    throw DomainError("operator factor has wrong dimension");
  }
  return kron(spin, boson);
}

Matrix Space::embed_boson(const Matrix& boson) const {
  return embed_spin_boson(Matrix::Identity(spin_dim_, spin_dim_), boson);
}

Matrix Space::identity() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  return Matrix::Identity(d, d);
}

Vector Space::basis_vector(std::span<const int> levels, int n) const {
  if (static_cast<int>(levels.size()) != ion_count()) throw DomainError("need one level per ion");
  Coordinates c;
  for (int i = 0; i < ion_count(); ++i) c.level[i] = levels[i];
  c.n = n;
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim_));
  v(static_cast<Eigen::Index>(flat_index(c))) = 1.0;
  return v;
}

Vector Space::product_vector(std::span<const Vector> ion_vectors, int n) const {
  if (static_cast<int>(ion_vectors.size()) != ion_count()) throw DomainError("need one vector per ion");
  if (n < 0 || n > n_cut()) throw DomainError("Fock index out of range");
  Matrix spin = Matrix::Ones(1, 1);
  for (const auto& v : ion_vectors) {
    if (v.size() != levels_per_ion()) throw DomainError("ion vector has wrong dimension");
    spin = kron(spin, Matrix(v));
  }
  Matrix fock = Matrix::Zero(boson_dim(), 1);
  fock(n, 0) = 1.0;
  return kron(spin, fock).col(0);
}

// ---------------------------------------------------------------------------

void require_same_basis(const BasisTag& a, const BasisTag& b) {
  if (!(a == b)) throw FrameMismatch("basis mismatch: " + to_string(a) + " vs " + to_string(b));
}

double OperatorMatrix::hermiticity_defect() const {
  const double norm = m_.norm();
  if (norm == 0.0) return 0.0;
  return (m_ - m_.adjoint()).norm() / norm;
}

double OperatorMatrix::unitarity_defect() const {
  return (m_ * m_.adjoint() - Matrix::Identity(m_.rows(), m_.cols())).norm();
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
  require_same_basis(tag_, other.tag_);
  m_ += other.m_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& other) {
  require_same_basis(tag_, other.tag_);
  m_ -= other.m_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx s) {
  m_ *= s;
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a.tag_, b.tag_);
  return {a.m_ * b.m_, a.tag_};
}

// ---------------------------------------------------------------------------

QuantumState QuantumState::pure(Vector psi, BasisTag tag, double tol) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > tol) throw DomainError("pure state is not normalized");
  QuantumState s(Kind::Pure, Matrix(psi), tag);
  s.vec_ = std::move(psi);
  return s;
}

QuantumState QuantumState::density(Matrix rho, BasisTag tag, double tol) {
  if (rho.rows() != rho.cols()) throw DomainError("density matrix must be square");
  const double scale = std::max(1.0, rho.norm());
  if ((rho - rho.adjoint()).norm() > tol * scale) throw DomainError("density matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol) {
    throw DomainError("density matrix trace differs from one");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw DomainError("density matrix is not positive");
  return QuantumState(Kind::Density, std::move(rho), tag);
}

const Vector& QuantumState::vector() const {
  if (kind_ != Kind::Pure) throw DomainError("state is a density matrix");
  return vec_;
}

Matrix QuantumState::density_matrix() const {
  if (kind_ == Kind::Density) return data_;
  return vec_ * vec_.adjoint();
}

double QuantumState::trace() const {
  if (kind_ == Kind::Pure) return vec_.squaredNorm();
  return data_.trace().real();
}

// ---------------------------------------------------------------------------

Matrix boson_annihilation(int n_cut) {
  const int n = n_cut + 1;
  Matrix a = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

Matrix displacement(int n_cut, double alpha) {
  const Matrix a = boson_annihilation(n_cut);
  const Matrix gen = alpha * (a.adjoint() - a);
  return gen.exp();
}

std::pair<OperatorMatrix, OperatorMatrix> ladder_ops(const Space& space, BasisTag tag) {
  const Matrix a = space.embed_boson(boson_annihilation(space.n_cut()));
  return {OperatorMatrix(a, tag), OperatorMatrix(a.adjoint(), tag)};
}

OperatorMatrix number_op(const Space& space, BasisTag tag) {
  const Matrix a = boson_annihilation(space.n_cut());
  return {space.embed_boson(a.adjoint() * a), tag};
}

OperatorMatrix transition_op(const Space& space, int ion, std::string_view from_level,
                             std::string_view to_level, BasisTag tag) {
  const int from = space.level_index(from_level);
  const int to = space.level_index(to_level);
  Matrix single = Matrix::Zero(space.levels_per_ion(), space.levels_per_ion());
  single(to, from) = 1.0;
  return {space.embed_ion(ion, single), tag};
}

OperatorMatrix sigma_z(const Space& space, int ion, BasisTag tag) {
  return transition_op(space, ion, "+1", "+1", tag) - transition_op(space, ion, "-1", "-1", tag);
}

Matrix dressed_single_ion(const std::vector<std::string>& levels) {
  const auto find = [&](std::string_view label) {
    auto it = std::find(levels.begin(), levels.end(), label);
    if (it == levels.end()) throw DomainError("dressed transform needs level '" + std::string(label) + "'");
    return static_cast<int>(it - levels.begin());
  };
  const int i0 = find("0");
  const int im = find("-1");
  const int ip = find("+1");
  const int n = static_cast<int>(levels.size());
  const double h = 0.5;
  const double r = 1.0 / std::sqrt(2.0);
  Matrix u = Matrix::Identity(n, n);
  // column i0 -> |u>, column im -> |d>, column ip -> |D>
  u.col(i0).setZero();
  u.col(im).setZero();
  u.col(ip).setZero();
  u(ip, i0) = h;
  u(im, i0) = h;
  u(i0, i0) = r;
  u(ip, im) = h;
  u(im, im) = h;
  u(i0, im) = -r;
  u(ip, ip) = r;
  u(im, ip) = -r;
  return u;
}

std::vector<std::string> dressed_labels(const std::vector<std::string>& bare_levels) {
  std::vector<std::string> out = bare_levels;
  for (auto& l : out) {
    if (l == "0") {
      l = "u";
    } else if (l == "-1") {
      l = "d";
    } else if (l == "+1") {
      l = "D";
    }
  }
  return out;
}

OperatorMatrix dressed_transform(const Space& space, int ion) {
  return {space.embed_ion(ion, dressed_single_ion(space.levels())), BasisTag{}};
}

OperatorMatrix dressed_transform_all(const Space& space) {
  Matrix u = space.identity();
  for (int ion = 0; ion < space.ion_count(); ++ion) u = u * dressed_transform(space, ion).matrix();
  return {u, BasisTag{}};
}

std::pair<Vector, Vector> qubit_vectors(const Space& space) {
  const int n = space.levels_per_ion();
  Vector down = Vector::Zero(n);
  Vector up = Vector::Zero(n);
  down(space.level_index("0'")) = 1.0;
  if (space.has_level("D")) {
    up(space.level_index("D")) = 1.0;
  } else {
    const double r = 1.0 / std::sqrt(2.0);
    up(space.level_index("+1")) = r;
    up(space.level_index("-1")) = -r;
  }
  return {down, up};
}

ThermalDistribution thermal_distribution(double nbar, int n_cut) {
  if (!(nbar >= 0.0)) throw DomainError("mean phonon number must be non-negative");
  if (n_cut < 0) throw DomainError("n_cut must be non-negative");
  ThermalDistribution out;
  out.probabilities.assign(static_cast<std::size_t>(n_cut) + 1, 0.0);
  if (nbar == 0.0) {
    out.probabilities[0] = 1.0;
    return out;
  }
  const double ratio = nbar / (1.0 + nbar);
  double p = 1.0 / (1.0 + nbar);
  double sum = 0.0;
  for (int n = 0; n <= n_cut; ++n) {
    out.probabilities[static_cast<std::size_t>(n)] = p;
    sum += p;
    p *= ratio;
  }
  // closed-form tail: ratio^(n_cut+1)
  out.leakage = std::pow(ratio, n_cut + 1);
  for (auto& q : out.probabilities) q /= sum;
  return out;
}

QuantumState thermal_state(const Space& space, double nbar, std::span<const Vector> ion_vectors,
                           double max_leakage, BasisTag tag) {
  const auto dist = thermal_distribution(nbar, space.n_cut());
  if (dist.leakage > max_leakage) {
    throw TruncationError("thermal tail beyond n_cut carries " + std::to_string(dist.leakage) +
                          " of the population");
  }
  const auto d = static_cast<Eigen::Index>(space.dim());
  Matrix rho = Matrix::Zero(d, d);
  for (int n = 0; n <= space.n_cut(); ++n) {
    const double p = dist.probabilities[static_cast<std::size_t>(n)];
    if (p == 0.0) continue;
    const Vector v = space.product_vector(ion_vectors, n);
    rho += p * v * v.adjoint();
  }
  return QuantumState::density(std::move(rho), tag);
}

double top_fock_population(const Space& space, const Matrix& state_or_rho) {
  double pop = 0.0;
  const bool is_vector = state_or_rho.cols() == 1;
  for (std::size_t i = 0; i < space.dim(); ++i) {
    if (space.coordinates(i).n != space.n_cut()) continue;
    const auto k = static_cast<Eigen::Index>(i);
    pop += is_vector ? std::norm(state_or_rho(k, 0)) : state_or_rho(k, k).real();
  }
  return pop;
}

}  // namespace msgate
