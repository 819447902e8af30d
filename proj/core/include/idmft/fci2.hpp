#pragma once

#include "idmft/hf.hpp"

namespace idmft {

/// One- and two-electron integrals transformed to an orthonormal MO basis.
struct MOIntegrals {
  Mat h;           ///< h_pq = C^T hcore C
  EriTensor eri;   ///< (pq|rs) in the MO basis, chemists' notation
  double v_nn = 0.0;
  Mat mo_coeffs;   ///< the AO x MO matrix used for the transform
};

/// Transform AO integrals into the orbital basis given by C (columns
/// orthonormal with respect to the AO overlap).  O(M^5) quarter transforms.
MOIntegrals ao_to_mo(const IntegralSet& ints, const Mat& coeffs, double v_nn);

/// Full CI result for a two-electron singlet.
struct CIResult {
  double energy = 0.0;     ///< ground state energy including nuclear repulsion
  Mat pair_coeffs;         ///< symmetric M x M wavefunction matrix, unit norm
  Mat no_coeffs;           ///< natural orbitals over AOs, one per column
  Vec no_occupations;      ///< per spin orbital, descending, in [0, 1], sum 1
};

/// Exact diagonalization in the singlet pair basis
/// { |pp>, (|pq> + |qp>)/sqrt(2) : p < q }.  Requires exactly two electrons.
CIResult fci_singlet(const MOIntegrals& mo, int n_electrons = 2);

/// Candidate one-particle entropy functionals over spin-orbital occupations.
enum class EntropyForm {
  occupations_only,       ///< -sum_i n_i ln n_i
  occupations_and_holes,  ///< -sum_i [n_i ln n_i + (1-n_i) ln(1-n_i)]
};

/// The form used throughout this code.  With it, a Fermi-Dirac distribution
/// over the orbital energies is the exact stationary point of the entropic
/// energy expression, which the occupations_only form does not admit.
inline constexpr EntropyForm default_entropy_form =
    EntropyForm::occupations_and_holes;

const char* entropy_form_name(EntropyForm form);

/// Entropy of a list of spin-orbital occupations, each in [0, 1]; terms with
/// n = 0 or n = 1 contribute zero by continuity.  Occupations outside
/// [-1e-10, 1 + 1e-10] raise std::invalid_argument.
double entropy(const Vec& occupations, EntropyForm form = default_entropy_form);

/// Convenience: entropy for a spin-compensated system described by per-spin
/// occupations of the spatial orbitals (each level counted for both spins).
double entropy_spin_compensated(const Vec& per_spin_occupations,
                                EntropyForm form = default_entropy_form);

/// Electron-electron energy decomposition of a correlated 1-RDM:
///   e_ee   expectation value of the electron repulsion in the CI state,
///   y      the density-matrix functional 1/2 Tr(gJ) - 1/4 Tr(gK),
///   e_cum  the remainder e_ee - y,
///   s      entropy of the natural occupations (selected form).
struct CumulantBreakdown {
  double e_ee = 0.0;
  double y = 0.0;
  double e_cum = 0.0;
  double s = 0.0;
};

CumulantBreakdown cumulant_energy(const CIResult& ci, const IntegralSet& ints);

} // namespace idmft
