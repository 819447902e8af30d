#include "idmft/idmft.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <sstream>

namespace idmft {

void EntropicParams::validate() const {
  if (variant == EntropicVariant::fixed_kappa) {
    if (!(kappa > 0.0))
      throw std::invalid_argument("fixed_kappa variant requires kappa > 0");
  } else {
    if (!(a > 0.0))
      throw std::invalid_argument("exchange_weighted variant requires a > 0");
  }
  if (!std::isfinite(b)) throw std::invalid_argument("shift b must be finite");
}

double y_energy(const Mat& gamma_ao, const EriTensor& eri) {
  auto [J, K] = build_JK(gamma_ao, eri);
  return 0.5 * (gamma_ao.array() * J.array()).sum() -
         0.25 * (gamma_ao.array() * K.array()).sum();
}

double exchange_energy(const Mat& coeffs, const Vec& per_spin_occupations,
                       const EriTensor& eri) {
  const std::size_t m = eri.dim();
  const Eigen::Index n_orb = per_spin_occupations.size();
  double ex = 0.0;
  for (Eigen::Index j = 0; j < n_orb; ++j) {
    if (per_spin_occupations(j) == 0.0) continue;
    Mat dj = coeffs.col(j) * coeffs.col(j).transpose();
    auto [J, K] = build_JK(dj, eri);
    for (Eigen::Index i = 0; i < n_orb; ++i) {
      if (per_spin_occupations(i) == 0.0) continue;
      double kij = coeffs.col(i).transpose() * K * coeffs.col(i);
      // -1/2 sum over spin orbitals; same-spin pairs in both channels
      ex -= per_spin_occupations(i) * per_spin_occupations(j) * kij;
    }
  }
  return ex;
}

Vec fermi_dirac(const Vec& energies, double mu, double kT) {
  if (!(kT > 0.0)) throw std::invalid_argument("fermi_dirac requires kT > 0");
  Vec n(energies.size());
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    double x = (energies(i) - mu) / kT;
    x = std::min(500.0, std::max(-500.0, x));
    n(i) = 1.0 / (1.0 + std::exp(x));
  }
  return n;
}

double solve_mu(const Vec& energies, double kT, double n_electrons) {
  if (!(kT > 0.0)) throw std::invalid_argument("solve_mu requires kT > 0");
  if (!(n_electrons > 0.0) || n_electrons >= 2.0 * double(energies.size()))
    throw std::invalid_argument("solve_mu: electron count out of range");
  double lo = energies.minCoeff() - 50.0 * kT;
  double hi = energies.maxCoeff() + 50.0 * kT;
  auto count = [&](double mu) { return 2.0 * fermi_dirac(energies, mu, kT).sum(); };
  for (int it = 0; it < 500; ++it) {
    double mid = 0.5 * (lo + hi);
    double c = count(mid);
    if (std::abs(c - n_electrons) < 1e-12) return mid;
    if (c < n_electrons)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(mid))) return mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

struct IterationState {
  double energy = 0.0;    // b-free electronic energy + V_nn
  double entropy = 0.0;
  double exchange = 0.0;
};

} // namespace

IDMFTResult idmft_scf(const Molecule& mol, const IntegralSet& ints,
                      const EntropicParams& params, const ScfOptions& opt) {
  params.validate();
  if (mol.n_electrons() != 2)
    throw std::invalid_argument(
        "idmft_scf is formulated for two-electron systems, got " +
        std::to_string(mol.n_electrons()) + " electrons");

  const std::size_t m = ints.size();
  const double v_nn = mol.nuclear_repulsion();
  const Mat X = orthogonalizer(ints.S);
  const bool weighted = params.variant == EntropicVariant::exchange_weighted;

  ScfResult hf = rhf_scf(mol, ints, opt);
  Mat coeffs = hf.orbitals.coeffs;
  Vec eps = hf.orbitals.energies;
  Vec n = Vec::Zero(m);
  n(0) = 1.0;
  // the iteration state is the density matrix itself; occupation vectors
  // alone cannot detect a flip of orbital character between iterations
  Mat gamma = density_matrix(coeffs, 2.0 * n);

  double energy_prev = 0.0;
  double dg = 0.0, de = 0.0, mu = 0.0, kT = 0.0;
  std::deque<double> dg_history;
  int iter = 1;

  for (; iter <= opt.max_iter; ++iter) {
    auto [J, K] = build_JK(gamma, ints.eri);
    // entropic weight and temperature from the last output pair; the mixed
    // density only feeds the mean field
    double s_in = entropy_spin_compensated(n);
    double ex_in = weighted ? exchange_energy(coeffs, n, ints.eri) : 0.0;

    double weight = weighted ? params.a * s_in : 0.0;
    Mat fock = ints.hcore + J - 0.5 * (1.0 + weight) * K;

    Eigen::SelfAdjointEigenSolver<Mat> es(X.transpose() * fock * X);
    Mat coeffs_out = X * es.eigenvectors();
    eps = es.eigenvalues();

    kT = weighted ? std::max(-params.a * ex_in, 1e-12) : params.kappa;
    mu = solve_mu(eps, kT, 2.0);
    Vec n_out = fermi_dirac(eps, mu, kT);
    Mat gamma_out = density_matrix(coeffs_out, 2.0 * n_out);

    // b-free energy of the output state
    auto [Jo, Ko] = build_JK(gamma_out, ints.eri);
    double y_out = 0.5 * (gamma_out.array() * Jo.array()).sum() -
                   0.25 * (gamma_out.array() * Ko.array()).sum();
    double s_out = entropy_spin_compensated(n_out);
    double ex_out = weighted ? exchange_energy(coeffs_out, n_out, ints.eri) : 0.0;
    double entropic = weighted ? params.a * ex_out * s_out
                               : -params.kappa * s_out;
    double energy_now = (gamma_out.array() * ints.hcore.array()).sum() +
                        y_out + entropic + v_nn;
    de = energy_now - energy_prev;
    energy_prev = energy_now;

    dg = (gamma_out - gamma).cwiseAbs().maxCoeff();
    dg_history.push_back(dg);
    if (dg_history.size() > 5) dg_history.pop_front();
    if (opt.verbose)
      std::fprintf(stderr,
                   "idmft iter %4d  E = %.12f  dg = %.3e  dE = %.3e\n", iter,
                   energy_now, dg, de);

    coeffs = coeffs_out;
    n = n_out;
    if (iter > 1 && dg < opt.occupation_tol && std::abs(de) < opt.energy_tol)
      break;

    gamma = 0.5 * gamma + 0.5 * gamma_out;
  }

  if (iter > opt.max_iter) {
    std::ostringstream msg;
    msg << "occupation self-consistency not reached in " << opt.max_iter
        << " iterations (|dE| = " << std::abs(de)
        << ", recent density steps:";
    for (double h : dg_history) msg << " " << h;
    msg << "); the iteration may be oscillating, consider stronger mixing";
    throw ScfError(msg.str(), energy_prev, dg);
  }

  // assemble the converged state once, so the reported breakdown is exactly
  // self-consistent
  IDMFTResult out;
  gamma = density_matrix(coeffs, 2.0 * n);
  auto [J, K] = build_JK(gamma, ints.eri);
  out.per_spin_occupations = n;
  out.mu = mu;
  out.entropy_value = entropy_spin_compensated(n);
  out.exchange = exchange_energy(coeffs, n, ints.eri);
  out.breakdown.one_electron = (gamma.array() * ints.hcore.array()).sum();
  out.breakdown.y = 0.5 * (gamma.array() * J.array()).sum() -
                    0.25 * (gamma.array() * K.array()).sum();
  out.breakdown.entropic = weighted ? params.a * out.exchange * out.entropy_value
                                    : -params.kappa * out.entropy_value;
  out.breakdown.shift = -params.b;
  out.breakdown.nuclear = v_nn;
  out.energy = out.breakdown.total();
  out.orbitals.coeffs = coeffs;
  out.orbitals.energies = eps;
  out.orbitals.occupations = 2.0 * n;
  out.iterations = iter;

  out.occupation_collapse = true;
  for (Eigen::Index i = 0; i < n.size(); ++i)
    if (n(i) > 1e-14 && n(i) < 1.0 - 1e-14) out.occupation_collapse = false;

  return out;
}

std::vector<OrbitalEnergyPoint> orbital_energy_trace(
    const Molecule& diatomic_template, const EntropicParams& params,
    const std::vector<double>& separations_bohr, const ShellLibrary& lib,
    const ScfOptions& opt) {
  if (params.variant != EntropicVariant::exchange_weighted)
    throw std::invalid_argument(
        "orbital_energy_trace requires the exchange_weighted variant");
  if (diatomic_template.atoms.size() != 2)
    throw std::invalid_argument("orbital_energy_trace requires a diatomic");

  std::vector<OrbitalEnergyPoint> trace;
  trace.reserve(separations_bohr.size());
  for (double r : separations_bohr) {
    Molecule mol = Molecule::diatomic(diatomic_template.atoms[0].element,
                                      diatomic_template.atoms[1].element, r,
                                      diatomic_template.net_charge);
    OrbitalEnergyPoint pt;
    pt.r_bohr = r;
    try {
      AOBasis basis = build_ao_basis(mol, lib);
      IntegralSet ints = IntegralSet::compute(basis, mol);
      IDMFTResult res = idmft_scf(mol, ints, params, opt);
      pt.eps1 = res.orbitals.energies(0);
      pt.eps2 = res.orbitals.energies.size() > 1 ? res.orbitals.energies(1)
                                                 : std::nan("");
      pt.converged = true;
    } catch (const std::exception&) {
      pt.eps1 = pt.eps2 = std::nan("");
      pt.converged = false;
    }
    trace.push_back(pt);
  }
  return trace;
}

} // namespace idmft
