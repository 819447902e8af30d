#include <doctest.h>

#include <idmft/fci2.hpp>
#include <idmft/system.hpp>

#include "oracle/detfci.hpp"
#include "reference_data.hpp"

#include <cmath>

using namespace idmft;

namespace {

struct Prepared {
  Molecule mol;
  IntegralSet ints;
  ScfResult hf;
};

Prepared prepare(const std::string& a, const std::string& b, double r_bohr,
                 int charge) {
  Prepared p;
  p.mol = Molecule::diatomic(a, b, r_bohr, charge);
  AOBasis basis = build_ao_basis(p.mol, parse_basis(builtin_ccpvdz()));
  p.ints = IntegralSet::compute(basis, p.mol);
  p.hf = rhf_scf(p.mol, p.ints);
  return p;
}

} // namespace

TEST_SUITE("fci2") {

TEST_CASE("pair basis agrees with the determinant expansion") {
  struct Geo {
    const char *a, *b;
    double r_bohr;
    int charge;
  };
  const Geo geos[] = {
      {"He", "H", 0.80 * angstrom_to_bohr, 1},
      {"He", "H", 2.00 * angstrom_to_bohr, 1},
      {"H", "H", 1.4, 0},
      {"H", "H", 10.0, 0},
      {"He", "He", 2.0, 2},
  };
  for (const Geo& g : geos) {
    INFO(g.a, "-", g.b, " at ", g.r_bohr, " bohr");
    Prepared p = prepare(g.a, g.b, g.r_bohr, g.charge);
    MOIntegrals mo =
        ao_to_mo(p.ints, p.hf.orbitals.coeffs, p.mol.nuclear_repulsion());
    CIResult ci = fci_singlet(mo);
    CHECK(std::abs(ci.energy - oracle::detfci_ground_energy(mo)) < 1e-10);
    CHECK(ci.energy <= p.hf.energy + 1e-12);
  }
}

TEST_CASE("invariant under the orbital basis choice") {
  Prepared p = prepare("He", "H", 0.80 * angstrom_to_bohr, 1);
  double v_nn = p.mol.nuclear_repulsion();

  CIResult from_hf = fci_singlet(ao_to_mo(p.ints, p.hf.orbitals.coeffs, v_nn));
  CIResult from_lowdin = fci_singlet(ao_to_mo(p.ints, orthogonalizer(p.ints.S), v_nn));
  CHECK(std::abs(from_hf.energy - from_lowdin.energy) < 1e-10);

  // natural occupations are basis independent too
  for (int i = 0; i < from_hf.no_occupations.size(); ++i)
    CHECK(from_hf.no_occupations(i) ==
          doctest::Approx(from_lowdin.no_occupations(i)).epsilon(1e-9));
}

TEST_CASE("wavefunction and natural orbital structure") {
  Prepared p = prepare("He", "H", 0.80 * angstrom_to_bohr, 1);
  MOIntegrals mo =
      ao_to_mo(p.ints, p.hf.orbitals.coeffs, p.mol.nuclear_repulsion());
  CIResult ci = fci_singlet(mo);

  CHECK(ci.pair_coeffs.rows() == 10);
  CHECK((ci.pair_coeffs - ci.pair_coeffs.transpose()).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK(ci.pair_coeffs.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));

  const Vec& n = ci.no_occupations;
  CHECK(n.sum() == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < n.size(); ++i) {
    CHECK(n(i) >= -1e-14);
    CHECK(n(i) <= 1.0 + 1e-14);
    if (i > 0) CHECK(n(i) <= n(i - 1) + 1e-14);
  }

  // natural orbitals are orthonormal in the AO metric
  Mat ovl = ci.no_coeffs.transpose() * p.ints.S * ci.no_coeffs;
  CHECK((ovl - Mat::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(fci_singlet(mo, 3), std::invalid_argument);
}

TEST_CASE("cumulant decomposition at the equilibrium row") {
  Prepared p = prepare("He", "H", 0.80 * angstrom_to_bohr, 1);
  double v_nn = p.mol.nuclear_repulsion();
  CIResult ci = fci_singlet(ao_to_mo(p.ints, p.hf.orbitals.coeffs, v_nn));
  CumulantBreakdown cb = cumulant_energy(ci, p.ints);

  CHECK(cb.e_cum == doctest::Approx(cb.e_ee - cb.y).epsilon(1e-14));
  CHECK(cb.s == doctest::Approx(refdata::heh_curve[4].s).epsilon(2e-6));
  CHECK(cb.e_cum == doctest::Approx(refdata::heh_curve[4].e_cum).epsilon(2e-5));

  // the CI energy must reassemble from Tr(gamma h) + E_ee + V_nn
  Mat gamma = density_matrix(ci.no_coeffs, 2.0 * ci.no_occupations);
  double e = (gamma * p.ints.hcore).trace() + cb.e_ee + v_nn;
  CHECK(std::abs(e - ci.energy) < 1e-10);

  // and Y must match its definition over the same density
  auto [J, K] = build_JK(gamma, p.ints.eri);
  double y = 0.5 * (gamma * J).trace() - 0.25 * (gamma * K).trace();
  CHECK(cb.y == doctest::Approx(y).epsilon(1e-12));
}

TEST_CASE("entropy forms") {
  Vec half(2);
  half << 0.5, 0.5;
  CHECK(entropy(half, EntropyForm::occupations_only) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(entropy(half, EntropyForm::occupations_and_holes) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
  CHECK(entropy_spin_compensated(half) ==
        doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-14));

  Vec pure(3);
  pure << 1.0, 0.0, 0.0;
  CHECK(entropy(pure, EntropyForm::occupations_only) == 0.0);
  CHECK(entropy(pure, EntropyForm::occupations_and_holes) == 0.0);

  // boundary noise within 1e-10 is clamped rather than rejected
  Vec edge(2);
  edge << 1.0 + 5e-11, -5e-11;
  CHECK(entropy(edge) == 0.0);

  Vec bad(1);
  bad << 1.2;
  CHECK_THROWS_AS(entropy(bad), std::invalid_argument);
  bad << -0.2;
  CHECK_THROWS_AS(entropy(bad), std::invalid_argument);

  CHECK(std::string(entropy_form_name(EntropyForm::occupations_only)) ==
        "occupations_only");
  CHECK(std::string(entropy_form_name(EntropyForm::occupations_and_holes)) ==
        "occupations_and_holes");
}

TEST_CASE("ao_to_mo sanity") {
  Prepared p = prepare("H", "H", 1.4, 0);
  Mat X = orthogonalizer(p.ints.S);
  MOIntegrals mo = ao_to_mo(p.ints, X, 0.5);

  Mat href = X.transpose() * p.ints.hcore * X;
  CHECK((mo.h - href).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(mo.v_nn == 0.5);

  // a slow explicit transform of one ERI entry
  double ref = 0.0;
  const int m = int(p.ints.size());
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d)
          ref += X(a, 1) * X(b, 2) * X(c, 0) * X(d, 3) * p.ints.eri(a, b, c, d);
  CHECK(mo.eri(1, 2, 0, 3) == doctest::Approx(ref).epsilon(1e-12));

  Mat wrong(3, 3);
  CHECK_THROWS_AS(ao_to_mo(p.ints, wrong, 0.0), std::invalid_argument);
}

TEST_CASE("deterministic across reruns") {
  Prepared p = prepare("He", "H", 0.80 * angstrom_to_bohr, 1);
  MOIntegrals mo =
      ao_to_mo(p.ints, p.hf.orbitals.coeffs, p.mol.nuclear_repulsion());
  CIResult a = fci_singlet(mo);
  CIResult b = fci_singlet(mo);
  CHECK(a.energy == b.energy);
  CHECK((a.no_coeffs - b.no_coeffs).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.pair_coeffs - b.pair_coeffs).cwiseAbs().maxCoeff() == 0.0);
}

} // TEST_SUITE
