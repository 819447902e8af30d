#pragma once

#include "idmft/system.hpp"
#include "idmft/types.hpp"

#include <iosfwd>

namespace idmft {

/// Boys function F_m(x) = \int_0^1 t^{2m} exp(-x t^2) dt.
/// Series with downward recursion for small x, asymptotic erf form with
/// upward recursion for large x.  Absolute accuracy better than 1e-13 over
/// m <= 16, x in [0, 500].
double boys(int m, double x);

/// Contracted integrals over normalized Cartesian Gaussians.
double overlap(const AOFunction& a, const AOFunction& b);
double kinetic(const AOFunction& a, const AOFunction& b);
/// Nuclear attraction sum over all nuclei, i.e. <a| -sum_C Z_C/r_C |b>.
double nuclear_attraction(const AOFunction& a, const AOFunction& b,
                          const std::vector<Atom>& atoms);
/// Two-electron repulsion integral (ab|cd) in chemists' notation.
double repulsion(const AOFunction& a, const AOFunction& b,
                 const AOFunction& c, const AOFunction& d);

struct IntegralSet {
  Mat S;          ///< overlap
  Mat T;          ///< kinetic energy
  Mat V;          ///< nuclear attraction (negative definite part of hcore)
  Mat hcore;      ///< T + V
  EriTensor eri;  ///< (ij|kl), chemists' notation

  std::size_t size() const { return std::size_t(S.rows()); }

  static IntegralSet compute(const AOBasis& basis, const Molecule& mol);

  /// Labeled text dump of S, T, V and the canonically unique (ij|kl) at
  /// 17 significant digits.
  void dump(std::ostream& os) const;
};

} // namespace idmft
