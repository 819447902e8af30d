#pragma once

// Test-only integral oracle.  Evaluates the Gaussian one- and two-electron
// integrals by numerical quadrature (Gauss-Hermite in space, a transformed
// Gauss-Legendre rule for the Coulomb kernel) rather than by the recursive
// scheme used in the library, so the two can be compared independently.

#include <idmft/system.hpp>

namespace oracle {

double overlap_q(const idmft::AOFunction& a, const idmft::AOFunction& b);
double kinetic_q(const idmft::AOFunction& a, const idmft::AOFunction& b);
/// <a| 1/r_C |b>, one attraction center, positive.
double coulomb_q(const idmft::AOFunction& a, const idmft::AOFunction& b,
                 const Eigen::Vector3d& c);
/// (ab|cd), chemists' notation.
double repulsion_q(const idmft::AOFunction& a, const idmft::AOFunction& b,
                   const idmft::AOFunction& c, const idmft::AOFunction& d);

} // namespace oracle
