#include "idmft/hf.hpp"

#include <cmath>
#include <cstdio>
#include <deque>

namespace idmft {

Mat density_matrix(const Mat& coeffs, const Vec& occupations) {
  return coeffs * occupations.asDiagonal() * coeffs.transpose();
}

std::pair<Mat, Mat> build_JK(const Mat& gamma_ao, const EriTensor& eri) {
  const std::size_t m = eri.dim();
  Mat J = Mat::Zero(m, m);
  Mat K = Mat::Zero(m, m);
  for (std::size_t mu = 0; mu < m; ++mu)
    for (std::size_t nu = 0; nu < m; ++nu) {
      double j = 0.0, k = 0.0;
      for (std::size_t la = 0; la < m; ++la)
        for (std::size_t si = 0; si < m; ++si) {
          j += eri(mu, nu, la, si) * gamma_ao(la, si);
          k += eri(mu, la, nu, si) * gamma_ao(la, si);
        }
      J(mu, nu) = j;
      K(mu, nu) = k;
    }
  return {J, K};
}

ScfError::ScfError(const std::string& what, double last_energy_,
                   double residual_)
    : std::runtime_error(what), last_energy(last_energy_),
      residual(residual_) {}

Mat orthogonalizer(const Mat& S) {
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  if (es.eigenvalues().minCoeff() < 1e-10)
    throw std::runtime_error(
        "overlap matrix is near-singular (smallest eigenvalue " +
        std::to_string(es.eigenvalues().minCoeff()) + ")");
  Vec inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv_sqrt.asDiagonal() *
         es.eigenvectors().transpose();
}

namespace {

struct DiisState {
  std::deque<Mat> focks;
  std::deque<Mat> errors;
  std::size_t capacity;

  explicit DiisState(std::size_t cap) : capacity(cap) {}

  void push(const Mat& fock, const Mat& error) {
    focks.push_back(fock);
    errors.push_back(error);
    if (focks.size() > capacity) {
      focks.pop_front();
      errors.pop_front();
    }
  }

  /// Pulay extrapolation of the stored Fock matrices.  Minimizes the norm
  /// of the combined error vector subject to the coefficients summing to
  /// one, solving in the eigenbasis of the scaled error Gram matrix with
  /// small eigenvalues discarded.  When the coefficients still blow up the
  /// oldest vectors are dropped; returns the input if nothing usable is
  /// left.
  Mat extrapolate(const Mat& fallback) const {
    const int n = int(focks.size());
    for (int start = 0; n - start >= 2; ++start) {
      const int k = n - start;
      Mat G(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          G(i, j) = (errors[start + i].array() * errors[start + j].array())
                        .sum();
      double scale = G.diagonal().maxCoeff();
      if (!(scale > 0.0)) break;
      Eigen::SelfAdjointEigenSolver<Mat> es(G / scale);
      Vec ones = Vec::Ones(k);
      Vec w = Vec::Zero(k);
      for (int i = 0; i < k; ++i) {
        if (es.eigenvalues()(i) < 1e-12) continue;
        const Vec v = es.eigenvectors().col(i);
        w += (v.dot(ones) / es.eigenvalues()(i)) * v;
      }
      double denom = ones.dot(w);
      if (std::abs(denom) < 1e-14) continue;
      Vec c = w / denom;
      if (c.cwiseAbs().maxCoeff() > 1e4) continue;
      Mat F = Mat::Zero(fallback.rows(), fallback.cols());
      for (int i = 0; i < k; ++i) F += c(i) * focks[start + i];
      return F;
    }
    return fallback;
  }
};

} // namespace

ScfResult rhf_scf(const Molecule& mol, const IntegralSet& ints,
                  const ScfOptions& opt) {
  const int n_elec = mol.n_electrons();
  if (n_elec <= 0 || n_elec % 2 != 0)
    throw std::invalid_argument(
        "restricted SCF needs a positive even electron count, got " +
        std::to_string(n_elec));
  const int n_occ = n_elec / 2;
  const std::size_t m = ints.size();
  if (std::size_t(n_occ) > m)
    throw std::invalid_argument("more occupied orbitals than basis functions");

  const Mat X = orthogonalizer(ints.S);
  const double v_nn = mol.nuclear_repulsion();

  auto solve_orbitals = [&](const Mat& F) {
    Eigen::SelfAdjointEigenSolver<Mat> es(X.transpose() * F * X);
    OrbitalSet orb;
    orb.coeffs = X * es.eigenvectors();
    orb.energies = es.eigenvalues();
    orb.occupations = Vec::Zero(m);
    for (int i = 0; i < n_occ; ++i) orb.occupations(i) = 2.0;
    return orb;
  };

  OrbitalSet orb = solve_orbitals(ints.hcore);
  Mat gamma = density_matrix(orb.coeffs, orb.occupations);

  DiisState diis(std::size_t(std::max(opt.diis_size, 1)));
  Mat fock_prev;
  double energy = 0.0;
  double energy_prev = 0.0;
  double residual = 0.0;

  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    auto [J, K] = build_JK(gamma, ints.eri);
    Mat fock = ints.hcore + J - 0.5 * K;
    energy = 0.5 * (gamma.array() * (ints.hcore + fock).array()).sum() + v_nn;

    Mat commutator = fock * gamma * ints.S - ints.S * gamma * fock;
    residual = commutator.cwiseAbs().maxCoeff();
    if (opt.verbose)
      std::fprintf(stderr, "rhf iter %3d  E = %.12f  resid = %.3e\n", iter,
                   energy, residual);
    if (iter > 1 && residual < opt.residual_tol &&
        std::abs(energy - energy_prev) < opt.energy_tol) {
      orb = solve_orbitals(fock);
      return {orb, energy, iter, residual};
    }
    energy_prev = energy;

    Mat fock_eff = fock;
    if (iter <= opt.damping_steps && fock_prev.size() > 0)
      fock_eff = (1.0 - opt.damping) * fock + opt.damping * fock_prev;
    fock_prev = fock;

    diis.push(fock_eff, X.transpose() * commutator * X);
    if (iter > opt.damping_steps) fock_eff = diis.extrapolate(fock_eff);

    // level shift on the virtual space when the gap closes
    double gap = (int(m) > n_occ)
                     ? orb.energies(n_occ) - orb.energies(n_occ - 1)
                     : 1.0;
    if (gap < opt.gap_threshold && opt.level_shift > 0.0) {
      Mat c_virt = orb.coeffs.rightCols(m - std::size_t(n_occ));
      Mat proj = ints.S * c_virt * c_virt.transpose() * ints.S;
      fock_eff += opt.level_shift * proj;
    }

    orb = solve_orbitals(fock_eff);
    gamma = density_matrix(orb.coeffs, orb.occupations);
  }

  char msg[160];
  std::snprintf(msg, sizeof(msg),
                "SCF failed to converge in %d iterations "
                "(last energy %.12f, residual %.3e)",
                opt.max_iter, energy, residual);
  throw ScfError(msg, energy, residual);
}

} // namespace idmft
