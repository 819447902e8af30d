#pragma once

#include "idmft/integrals.hpp"

#include <utility>

namespace idmft {

/// Molecular orbitals with their energies and spin-summed occupations.
struct OrbitalSet {
  Mat coeffs;       ///< AO x MO coefficient matrix, one orbital per column
  Vec energies;
  Vec occupations;  ///< per spatial orbital, in [0, 2]
};

/// Spin-summed one-particle density matrix C diag(occ) C^T in the AO basis.
Mat density_matrix(const Mat& coeffs, const Vec& occupations);

/// Coulomb and exchange matrices for a spin-summed AO density matrix:
///   J_mn = sum_ls (mn|ls) g_ls,   K_mn = sum_ls (ml|ns) g_ls.
std::pair<Mat, Mat> build_JK(const Mat& gamma_ao, const EriTensor& eri);

struct ScfOptions {
  int max_iter = 500;
  double energy_tol = 1e-10;     ///< |E_k - E_{k-1}|
  double residual_tol = 1e-8;    ///< max |FDS - SDF|
  double occupation_tol = 1e-8;  ///< max |dgamma| for density self-consistency
  int diis_size = 8;
  double damping = 0.3;          ///< Fock damping weight on the old matrix
  int damping_steps = 3;         ///< iterations with damping active
  double level_shift = 0.2;      ///< virtual shift, hartree
  double gap_threshold = 0.05;   ///< enable the shift below this HOMO-LUMO gap
  bool verbose = false;
};

struct ScfError : std::runtime_error {
  ScfError(const std::string& what, double last_energy_, double residual_);
  double last_energy;
  double residual;
};

struct ScfResult {
  OrbitalSet orbitals;
  double energy = 0.0;     ///< total energy including nuclear repulsion
  int iterations = 0;
  double residual = 0.0;   ///< final max |FDS - SDF|
};

/// Restricted Hartree-Fock for an even number of electrons.  Core guess,
/// Fock damping on startup, DIIS acceleration, automatic level shift when
/// the HOMO-LUMO gap closes.  Throws ScfError carrying the last energy and
/// residual when max_iter is exhausted.
ScfResult rhf_scf(const Molecule& mol, const IntegralSet& ints,
                  const ScfOptions& opt = {});

/// S^{-1/2} by symmetric orthogonalization.  Throws std::runtime_error when
/// the overlap spectrum signals linear dependence (eigenvalue < 1e-10).
Mat orthogonalizer(const Mat& S);

} // namespace idmft
