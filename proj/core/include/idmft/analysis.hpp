#pragma once

#include "idmft/idmft.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace idmft {

/// Orbitals plus spin-summed occupations describing a one-particle density.
struct OrbitalDensity {
  Mat coeffs;       ///< AO x orbital, columns S-orthonormal
  Vec occupations;  ///< spin-summed, in [0, 2]
};

struct DensityDistance {
  double frobenius = 0.0;       ///< sqrt(Tr[((gA - gB) S)^2])
  double sum_sq_a = 0.0;        ///< sum_k (n_k^A)^2
  double sum_sq_b = 0.0;        ///< sum_m (n_m^B)^2
  double cross = 0.0;           ///< 2 sum_km n_k^A n_m^B <k|m>^2
  double occupation_distance = 0.0;  ///< l2 distance of sorted occupations

  /// The exact invariant-based expansion of frobenius^2.
  double decomposition() const { return sum_sq_a + sum_sq_b - cross; }
};

/// Basis-set-aware distance between two one-particle densities expanded in
/// the same AO basis, with its occupation/overlap decomposition.
DensityDistance frobenius_distance(const OrbitalDensity& a,
                                   const OrbitalDensity& b, const Mat& s_ao);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double correlation = 0.0;        ///< Pearson r
  std::vector<double> residuals;   ///< y_i - (slope x_i + intercept)
};

/// Ordinary least squares y = slope x + intercept.  Needs at least three
/// points and nonzero variance in x and y; throws std::invalid_argument
/// otherwise.
LinearFit linear_fit(const std::vector<std::pair<double, double>>& points);

struct ScanPoint {
  double r_angstrom = 0.0;
  std::optional<double> s;         ///< natural-occupation entropy (CI)
  std::optional<double> e_cum;     ///< cumulant energy (CI)
  std::optional<double> e_hf;
  std::optional<double> e_ci;
  std::optional<double> e_idmft;
  std::string error;               ///< empty when every method succeeded
};

struct ScanRequest {
  Molecule diatomic;               ///< two atoms; separation is overridden
  std::vector<double> r_angstrom;
  ShellLibrary basis;
  bool with_hf = true;
  bool with_ci = true;
  bool with_idmft = true;
  EntropicParams params;           ///< for the E_iDMFT column
  ScfOptions scf;
};

/// Rigid dissociation scan.  Geometries are evaluated independently in
/// input order; a failure at one separation is recorded in that row's error
/// field and does not abort the scan.
std::vector<ScanPoint> dissociation_scan(const ScanRequest& req);

/// CSV with fixed column order "R,S,E_cum,E_HF,E_CI,E_iDMFT,error".
/// Values use 6 decimals, or 17 significant digits with full_precision.
void write_scan_csv(std::ostream& os, const std::vector<ScanPoint>& points,
                    bool full_precision = false);
std::vector<ScanPoint> parse_scan_csv(std::istream& is);

struct ParamFit {
  double kappa = 0.0;
  double b = 0.0;
  double rms = 0.0;        ///< rms deviation from the references at the fit
  int n_points = 0;        ///< geometries used
  int n_failed = 0;        ///< geometries dropped due to SCF failures
};

/// Fit (kappa, b) of the fixed_kappa variant so that the shifted energies
/// match reference total energies across the given separations: coarse grid
/// in kappa with parabolic refinement, b in closed form (the mean offset).
/// When reference_energies is null the references are computed with full CI.
ParamFit fit_params(const ScanRequest& req,
                    const std::vector<double>* reference_energies = nullptr);

} // namespace idmft
