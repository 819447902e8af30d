#include <doctest.h>

#include <idmft/hf.hpp>
#include <idmft/system.hpp>

#include "reference_data.hpp"

#include <cmath>

using namespace idmft;

namespace {

struct Prepared {
  Molecule mol;
  IntegralSet ints;
};

Prepared prepare(const std::string& a, const std::string& b, double r_angstrom,
                 int charge) {
  Prepared p;
  p.mol = Molecule::diatomic(a, b, r_angstrom * angstrom_to_bohr, charge);
  AOBasis basis = build_ao_basis(p.mol, parse_basis(builtin_ccpvdz()));
  p.ints = IntegralSet::compute(basis, p.mol);
  return p;
}

} // namespace

TEST_SUITE("hf") {

TEST_CASE("heh+ equilibrium energy") {
  Prepared p = prepare("He", "H", 0.80, 1);
  ScfResult r = rhf_scf(p.mol, p.ints);

  CHECK(r.energy == doctest::Approx(refdata::heh_curve[4].e_hf).epsilon(1e-5));
  // pinned at full precision to catch silent numerical drift
  CHECK(std::abs(r.energy - (-2.9235319276672875)) < 1e-10);
  CHECK(r.iterations <= 30);
  CHECK(r.residual < 1e-8);
}

TEST_CASE("h2 near equilibrium") {
  Prepared p = prepare("H", "H", 0.74, 0);
  ScfResult r = rhf_scf(p.mol, p.ints);
  CHECK(std::abs(r.energy - (-1.128700092935226)) < 1e-9);
}

TEST_CASE("density and energy identities") {
  Prepared p = prepare("He", "H", 0.80, 1);
  ScfResult r = rhf_scf(p.mol, p.ints);

  Mat gamma = density_matrix(r.orbitals.coeffs, r.orbitals.occupations);
  CHECK((gamma * p.ints.S).trace() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.orbitals.occupations.sum() == doctest::Approx(2.0).epsilon(1e-14));

  // rebuild the energy from its pieces
  auto [J, K] = build_JK(gamma, p.ints.eri);
  double e = (gamma * p.ints.hcore).trace() + 0.5 * (gamma * J).trace() -
             0.25 * (gamma * K).trace() + p.mol.nuclear_repulsion();
  CHECK(e == doctest::Approx(r.energy).epsilon(1e-12));

  // converged orbitals satisfy the generalized eigenproblem
  Mat F = p.ints.hcore + J - 0.5 * K;
  Mat resid = F * r.orbitals.coeffs -
              p.ints.S * r.orbitals.coeffs * r.orbitals.energies.asDiagonal();
  CHECK(resid.cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("jk matrices from an explicit contraction") {
  Prepared p = prepare("H", "H", 1.0, 0);
  const int m = int(p.ints.size());
  Mat g = Mat::Random(m, m);
  g = (g + g.transpose()).eval();

  auto [J, K] = build_JK(g, p.ints.eri);
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu) {
      double j = 0.0, k = 0.0;
      for (int l = 0; l < m; ++l)
        for (int s = 0; s < m; ++s) {
          j += p.ints.eri(mu, nu, l, s) * g(l, s);
          k += p.ints.eri(mu, l, nu, s) * g(l, s);
        }
      CHECK(J(mu, nu) == doctest::Approx(j).epsilon(1e-12));
      CHECK(K(mu, nu) == doctest::Approx(k).epsilon(1e-12));
    }
}

TEST_CASE("orthogonalizer") {
  Prepared p = prepare("He", "H", 0.80, 1);
  Mat X = orthogonalizer(p.ints.S);
  Mat I = X.transpose() * p.ints.S * X;
  CHECK((I - Mat::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-12);

  Mat singular = Mat::Ones(3, 3);
  CHECK_THROWS_AS(orthogonalizer(singular), std::runtime_error);
}

TEST_CASE("iteration cap raises a descriptive error") {
  Prepared p = prepare("He", "H", 0.80, 1);
  ScfOptions opt;
  opt.max_iter = 2;
  try {
    rhf_scf(p.mol, p.ints, opt);
    FAIL("expected ScfError");
  } catch (const ScfError& e) {
    CHECK(std::string(e.what()).find("2 iterations") != std::string::npos);
    CHECK(e.last_energy < 0.0);
    CHECK(e.residual > 0.0);
  }
}

TEST_CASE("deterministic across reruns") {
  Prepared p = prepare("He", "H", 0.80, 1);
  ScfResult r1 = rhf_scf(p.mol, p.ints);
  ScfResult r2 = rhf_scf(p.mol, p.ints);
  CHECK(r1.energy == r2.energy);
  CHECK((r1.orbitals.coeffs - r2.orbitals.coeffs).cwiseAbs().maxCoeff() == 0.0);
}

} // TEST_SUITE
