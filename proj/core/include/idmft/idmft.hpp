#pragma once

#include "idmft/fci2.hpp"

namespace idmft {

/// How the entropic correction to the electron-electron energy is weighted.
enum class EntropicVariant {
  fixed_kappa,        ///< E_corr = -kappa * S - b
  exchange_weighted,  ///< E_corr = a * E_x * S - b  (E_x <= 0)
};

struct EntropicParams {
  EntropicVariant variant = EntropicVariant::fixed_kappa;
  double kappa = 0.0;  ///< entropy weight and orbital temperature (fixed_kappa)
  double a = 0.0;      ///< exchange weight (exchange_weighted)
  double b = 0.0;      ///< constant shift, enters only the final energy

  /// fixed_kappa requires kappa > 0; exchange_weighted requires a > 0.
  void validate() const;
};

/// Hartree plus exchange energy of a spin-summed AO density matrix:
/// 1/2 Tr(gamma J[gamma]) - 1/4 Tr(gamma K[gamma]).
double y_energy(const Mat& gamma_ao, const EriTensor& eri);

/// Exchange energy -1/2 sum_ij n_i n_j <ij|ji> over spin orbitals, given
/// spatial orbitals (columns of coeffs) and their per-spin occupations.
/// Both spin channels are included.  Always <= 0.
double exchange_energy(const Mat& coeffs, const Vec& per_spin_occupations,
                       const EriTensor& eri);

/// Fermi-Dirac occupations 1/(1 + exp((eps_i - mu)/kT)); the exponent is
/// clamped to +-500.  Requires kT > 0.
Vec fermi_dirac(const Vec& energies, double mu, double kT);

/// Chemical potential such that sum_i 2 n_i(mu) equals n_electrons, found
/// by bisection on [min(eps) - 50 kT, max(eps) + 50 kT] to 1e-12.
double solve_mu(const Vec& energies, double kT, double n_electrons);

struct EnergyBreakdown {
  double one_electron = 0.0;  ///< Tr(gamma hcore)
  double y = 0.0;             ///< Hartree + exchange functional
  double entropic = 0.0;      ///< -kappa S or a E_x S
  double shift = 0.0;         ///< -b
  double nuclear = 0.0;

  double total() const {
    return one_electron + y + entropic + shift + nuclear;
  }
};

struct IDMFTResult {
  OrbitalSet orbitals;        ///< natural orbitals; occupations spin-summed
  Vec per_spin_occupations;   ///< n_i in [0, 1]
  double mu = 0.0;
  double entropy_value = 0.0; ///< S at convergence (selected form)
  double exchange = 0.0;      ///< E_x at convergence
  double energy = 0.0;        ///< breakdown.total()
  EnergyBreakdown breakdown;
  int iterations = 0;
  bool occupation_collapse = false;  ///< all occupations pinned at 0 or 1
};

/// Self-consistent minimization of
///   E = Tr(gamma h) + Y[gamma] + E_corr(n) + V_nn
/// over orbitals and fractional occupations for a two-electron system.
/// Orbitals follow the effective Fock operator
///   F = h + J[gamma] - 1/2 (1 + w) K[gamma]
/// with w = 0 for fixed_kappa and w = a S for exchange_weighted; the
/// occupations are the Fermi-Dirac stationary point at temperature kappa
/// (fixed_kappa) or -a E_x (exchange_weighted).  Starts from converged
/// restricted Hartree-Fock orbitals, mixes the one-particle density 50/50
/// between iterations (occupation vectors alone cannot detect a flip of
/// orbital character), and converges on max|dgamma| < occ_tol and
/// |dE| < energy_tol.
/// The shift b does not enter the iteration, only the reported energy.
/// Throws ScfError with the recent step history if max_iter is exhausted.
IDMFTResult idmft_scf(const Molecule& mol, const IntegralSet& ints,
                      const EntropicParams& params, const ScfOptions& opt = {});

struct OrbitalEnergyPoint {
  double r_bohr = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  bool converged = false;
};

/// Lowest two orbital energies of the exchange_weighted solution along a
/// rigid dissociation curve of a diatomic (separations in bohr).  Points
/// whose SCF fails are flagged rather than aborting the trace.
std::vector<OrbitalEnergyPoint> orbital_energy_trace(
    const Molecule& diatomic_template, const EntropicParams& params,
    const std::vector<double>& separations_bohr, const ShellLibrary& lib,
    const ScfOptions& opt = {});

} // namespace idmft
