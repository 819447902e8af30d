#include "idmft/fci2.hpp"

#include <algorithm>
#include <cmath>

namespace idmft {

MOIntegrals ao_to_mo(const IntegralSet& ints, const Mat& coeffs, double v_nn) {
  const std::size_t m = ints.size();
  if (std::size_t(coeffs.rows()) != m || std::size_t(coeffs.cols()) != m)
    throw std::invalid_argument("ao_to_mo: coefficient matrix has wrong shape");

  MOIntegrals mo;
  mo.h = coeffs.transpose() * ints.hcore * coeffs;
  mo.v_nn = v_nn;
  mo.mo_coeffs = coeffs;

  // four quarter transforms, reusing a scratch tensor
  EriTensor a(m), b(m);
  const EriTensor& g = ints.eri;
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
          double sum = 0.0;
          for (std::size_t i = 0; i < m; ++i)
            sum += coeffs(i, p) * g(i, j, k, l);
          a(p, j, k, l) = sum;
        }
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
          double sum = 0.0;
          for (std::size_t j = 0; j < m; ++j)
            sum += coeffs(j, q) * a(p, j, k, l);
          b(p, q, k, l) = sum;
        }
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t l = 0; l < m; ++l) {
          double sum = 0.0;
          for (std::size_t k = 0; k < m; ++k)
            sum += coeffs(k, r) * b(p, q, k, l);
          a(p, q, r, l) = sum;
        }
  mo.eri = EriTensor(m);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t s = 0; s < m; ++s) {
          double sum = 0.0;
          for (std::size_t l = 0; l < m; ++l)
            sum += coeffs(l, s) * a(p, q, r, l);
          mo.eri(p, q, r, s) = sum;
        }
  return mo;
}

CIResult fci_singlet(const MOIntegrals& mo, int n_electrons) {
  if (n_electrons != 2)
    throw std::invalid_argument(
        "fci_singlet handles exactly two electrons, got " +
        std::to_string(n_electrons));
  const std::size_t m = std::size_t(mo.h.rows());
  const std::size_t dim = m * (m + 1) / 2;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(dim);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = p; q < m; ++q) pairs.emplace_back(p, q);

  // <pq|H|rs> for the spatial product |pq>, physicists' two-electron part
  auto elem = [&](std::size_t p, std::size_t q, std::size_t r,
                  std::size_t s) {
    double v = mo.eri(p, r, q, s);
    if (q == s) v += mo.h(p, r);
    if (p == r) v += mo.h(q, s);
    return v;
  };

  Mat H(dim, dim);
  for (std::size_t a = 0; a < dim; ++a) {
    auto [p, q] = pairs[a];
    double na = (p == q) ? 0.5 : 1.0 / std::sqrt(2.0);
    for (std::size_t b = a; b < dim; ++b) {
      auto [r, s] = pairs[b];
      double nb = (r == s) ? 0.5 : 1.0 / std::sqrt(2.0);
      double v = 2.0 * na * nb * (elem(p, q, r, s) + elem(p, q, s, r));
      H(a, b) = v;
      H(b, a) = v;
    }
  }

  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  Vec ground = es.eigenvectors().col(0);

  // fix the global sign: largest-magnitude component positive
  std::size_t imax = 0;
  for (std::size_t i = 1; i < dim; ++i)
    if (std::abs(ground(i)) > std::abs(ground(imax))) imax = i;
  if (ground(imax) < 0.0) ground = -ground;

  CIResult out;
  out.energy = es.eigenvalues()(0) + mo.v_nn;

  out.pair_coeffs = Mat::Zero(m, m);
  for (std::size_t a = 0; a < dim; ++a) {
    auto [p, q] = pairs[a];
    if (p == q) {
      out.pair_coeffs(p, p) = ground(a);
    } else {
      out.pair_coeffs(p, q) = ground(a) / std::sqrt(2.0);
      out.pair_coeffs(q, p) = out.pair_coeffs(p, q);
    }
  }

  // natural orbitals: eigenvectors of the symmetric wavefunction matrix;
  // per-spin occupations are the squared eigenvalues
  Eigen::SelfAdjointEigenSolver<Mat> nos(out.pair_coeffs);
  std::vector<std::size_t> order(m);
  for (std::size_t k = 0; k < m; ++k) order[k] = k;
  Vec occ_raw = nos.eigenvalues().array().square();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return occ_raw(x) > occ_raw(y);
  });

  out.no_occupations = Vec(m);
  out.no_coeffs = Mat(m, m);
  Mat no_mo = nos.eigenvectors();
  for (std::size_t k = 0; k < m; ++k) {
    out.no_occupations(k) = occ_raw(order[k]);
    out.no_coeffs.col(k) = mo.mo_coeffs * no_mo.col(order[k]);
    // deterministic sign: largest-magnitude AO coefficient positive
    std::size_t jmax = 0;
    for (std::size_t j = 1; j < m; ++j)
      if (std::abs(out.no_coeffs(j, k)) > std::abs(out.no_coeffs(jmax, k)))
        jmax = j;
    if (out.no_coeffs(jmax, k) < 0.0) out.no_coeffs.col(k) *= -1.0;
  }
  return out;
}

const char* entropy_form_name(EntropyForm form) {
  switch (form) {
    case EntropyForm::occupations_only: return "occupations_only";
    case EntropyForm::occupations_and_holes: return "occupations_and_holes";
  }
  return "unknown";
}

double entropy(const Vec& occupations, EntropyForm form) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < occupations.size(); ++i) {
    double n = occupations(i);
    if (n < -1e-10 || n > 1.0 + 1e-10)
      throw std::invalid_argument("entropy: occupation " + std::to_string(n) +
                                  " outside [0, 1]");
    n = std::min(1.0, std::max(0.0, n));
    if (n > 0.0) s -= n * std::log(n);
    if (form == EntropyForm::occupations_and_holes && n < 1.0)
      s -= (1.0 - n) * std::log(1.0 - n);
  }
  return s;
}

double entropy_spin_compensated(const Vec& per_spin_occupations,
                                EntropyForm form) {
  return 2.0 * entropy(per_spin_occupations, form);
}

CumulantBreakdown cumulant_energy(const CIResult& ci, const IntegralSet& ints) {
  if (ci.pair_coeffs.size() == 0)
    throw std::invalid_argument("cumulant_energy: CI result has no wavefunction");
  const std::size_t m = std::size_t(ci.no_occupations.size());
  CumulantBreakdown out;

  // spin-summed 1-RDM in the AO basis
  Vec occ2 = 2.0 * ci.no_occupations;
  Mat gamma = ci.no_coeffs * occ2.asDiagonal() * ci.no_coeffs.transpose();
  auto [J, K] = build_JK(gamma, ints.eri);
  out.y = 0.5 * (gamma.array() * J.array()).sum() -
          0.25 * (gamma.array() * K.array()).sum();

  // In its natural orbital expansion the singlet is diagonal,
  // |Psi> = sum_k c_k |chi_k chi_k>, so
  //   E_ee = sum_{kl} c_k c_l (kl|kl)   (chemists' notation).
  // The signed amplitudes c_k are the eigenvalues of the wavefunction
  // matrix, ordered like no_occupations.
  Eigen::SelfAdjointEigenSolver<Mat> es(ci.pair_coeffs);
  Vec ev = es.eigenvalues();
  std::vector<std::size_t> order(m);
  for (std::size_t k = 0; k < m; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return ev(a) * ev(a) > ev(b) * ev(b);
                   });

  MOIntegrals no_ints = ao_to_mo(ints, ci.no_coeffs, 0.0);
  double e_ee = 0.0;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l)
      e_ee += ev(order[k]) * ev(order[l]) * no_ints.eri(k, l, k, l);
  out.e_ee = e_ee;
  out.e_cum = out.e_ee - out.y;
  out.s = entropy_spin_compensated(ci.no_occupations);
  return out;
}

} // namespace idmft
