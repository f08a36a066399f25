#include "msgate/noise.hpp"

#include <cmath>

#include "msgate/hamiltonian.hpp"

namespace msgate {

void NoiseModel::validate() const {
  const auto check = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be finite and non-negative");
  };
  check(heating_rate, "heating_rate");
  check(depol_time, "depol_time");
  check(b_noise_rms, "b_noise_rms");
  check(std::abs(dressing_imbalance[0]), "dressing_imbalance");
  check(std::abs(dressing_imbalance[1]), "dressing_imbalance");
}

bool NoiseModel::is_noiseless() const {
  return heating_rate == 0.0 && depol_time == 0.0 && b_noise_rms == 0.0 && dressing_imbalance[0] == 0.0 &&
         dressing_imbalance[1] == 0.0;
}

std::vector<SparseMatrix> heating_collapse_ops(const Space& space, double rate, double eta) {
  if (!(rate >= 0.0)) throw DomainError("heating rate must be non-negative");
  if (rate == 0.0) return {};
  if (space.n_cut() < 1) throw DomainError("heating needs n_cut >= 1");
  Matrix a = space.embed_boson(boson_annihilation(space.n_cut()));
  if (eta != 0.0 && space.has_level("+1") && space.has_level("-1")) {
    for (int ion = 0; ion < space.ion_count(); ++ion) {
      const double e = ion == 0 ? eta : -eta;
      a -= e * sigma_z(space, ion).matrix();
    }
  }
  const double s = std::sqrt(rate);
  return {to_sparse(s * a), to_sparse(s * Matrix(a.adjoint()))};
}

std::vector<SparseMatrix> depolarization_collapse_ops(const Space& space, double depol_time) {
  if (!(depol_time >= 0.0)) throw DomainError("depolarization time must be non-negative");
  if (depol_time == 0.0) return {};
  const auto [down, up] = qubit_vectors(space);
  const Matrix flip = up * down.adjoint();  // |D><0'|
  const Matrix sx = flip + flip.adjoint();
  const Matrix sy = -kI * (flip - flip.adjoint());
  const Matrix sz = up * up.adjoint() - down * down.adjoint();
  const double s = std::sqrt(1.0 / (4.0 * depol_time));
  std::vector<SparseMatrix> out;
  for (int ion = 0; ion < space.ion_count(); ++ion) {
    for (const Matrix* m : {&sx, &sy, &sz}) out.push_back(to_sparse(s * space.embed_ion(ion, *m)));
  }
  return out;
}

}  // namespace msgate
