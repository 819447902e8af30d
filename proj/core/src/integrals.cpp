#include "idmft/integrals.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace idmft {

namespace {

constexpr double two_pi_pow_2_5 = 34.986836655249725693; // 2 pi^{5/2}

/// Fill table[0..m_max] with F_m(x).
void boys_table(int m_max, double x, double* table) {
  if (x < 1e-14) {
    for (int m = 0; m <= m_max; ++m)
      table[m] = 1.0 / (2 * m + 1) - x / (2 * m + 3);
    return;
  }
  if (x < 30.0) {
    // series for the highest order, then stable downward recursion
    double term = 1.0 / (2 * m_max + 1);
    double sum = term;
    for (int k = 1; k < 300; ++k) {
      term *= 2.0 * x / (2 * m_max + 2 * k + 1);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    double ex = std::exp(-x);
    table[m_max] = ex * sum;
    for (int m = m_max; m > 0; --m)
      table[m - 1] = (2.0 * x * table[m] + ex) / (2 * m - 1);
  } else {
    // erf form for F_0, upward recursion (stable at large x)
    double sx = std::sqrt(x);
    table[0] = 0.5 * std::sqrt(M_PI) / sx * std::erf(sx);
    double ex = std::exp(-x);
    for (int m = 0; m < m_max; ++m)
      table[m + 1] = ((2 * m + 1) * table[m] - ex) / (2.0 * x);
  }
}

/// Hermite expansion coefficient E_t^{ij} for a product of two 1-d
/// Gaussians with exponents a, b separated by q_x = A_x - B_x.
double hermite_e(int i, int j, int t, double qx, double a, double b) {
  double p = a + b;
  double q = a * b / p;
  if (t < 0 || t > i + j) return 0.0;
  if (i == 0 && j == 0 && t == 0) return std::exp(-q * qx * qx);
  if (i > 0) {
    return hermite_e(i - 1, j, t - 1, qx, a, b) / (2.0 * p) -
           q * qx / a * hermite_e(i - 1, j, t, qx, a, b) +
           (t + 1) * hermite_e(i - 1, j, t + 1, qx, a, b);
  }
  return hermite_e(i, j - 1, t - 1, qx, a, b) / (2.0 * p) +
         q * qx / b * hermite_e(i, j - 1, t, qx, a, b) +
         (t + 1) * hermite_e(i, j - 1, t + 1, qx, a, b);
}

/// Hermite Coulomb integral R_{tuv}^n.
double hermite_r(int t, int u, int v, int n, double p,
                 const Eigen::Vector3d& pc, const double* boys) {
  if (t < 0 || u < 0 || v < 0) return 0.0;
  if (t == 0 && u == 0 && v == 0) {
    double val = boys[n];
    for (int k = 0; k < n; ++k) val *= -2.0 * p;
    return val;
  }
  if (t > 0)
    return (t - 1) * hermite_r(t - 2, u, v, n + 1, p, pc, boys) +
           pc[0] * hermite_r(t - 1, u, v, n + 1, p, pc, boys);
  if (u > 0)
    return (u - 1) * hermite_r(t, u - 2, v, n + 1, p, pc, boys) +
           pc[1] * hermite_r(t, u - 1, v, n + 1, p, pc, boys);
  return (v - 1) * hermite_r(t, u, v - 2, n + 1, p, pc, boys) +
         pc[2] * hermite_r(t, u, v - 1, n + 1, p, pc, boys);
}

double overlap_prim(double a, const std::array<int, 3>& la,
                    const Eigen::Vector3d& A, double b,
                    const std::array<int, 3>& lb, const Eigen::Vector3d& B) {
  double p = a + b;
  double s = std::pow(M_PI / p, 1.5);
  for (int d = 0; d < 3; ++d)
    s *= hermite_e(la[d], lb[d], 0, A[d] - B[d], a, b);
  return s;
}

double kinetic_prim(double a, const std::array<int, 3>& la,
                    const Eigen::Vector3d& A, double b, std::array<int, 3> lb,
                    const Eigen::Vector3d& B) {
  double term0 = b * (2 * (lb[0] + lb[1] + lb[2]) + 3) *
                 overlap_prim(a, la, A, b, lb, B);
  double term1 = 0.0, term2 = 0.0;
  for (int d = 0; d < 3; ++d) {
    std::array<int, 3> up = lb;
    up[d] += 2;
    term1 += overlap_prim(a, la, A, b, up, B);
    if (lb[d] >= 2) {
      std::array<int, 3> dn = lb;
      dn[d] -= 2;
      term2 += lb[d] * (lb[d] - 1) * overlap_prim(a, la, A, b, dn, B);
    }
  }
  return term0 - 2.0 * b * b * term1 - 0.5 * term2;
}

/// <a| 1/r_C |b> for a single attraction center C (positive quantity).
double coulomb_prim(double a, const std::array<int, 3>& la,
                    const Eigen::Vector3d& A, double b,
                    const std::array<int, 3>& lb, const Eigen::Vector3d& B,
                    const Eigen::Vector3d& C) {
  double p = a + b;
  Eigen::Vector3d P = (a * A + b * B) / p;
  Eigen::Vector3d pc = P - C;
  int m_max = la[0] + la[1] + la[2] + lb[0] + lb[1] + lb[2];
  double boys_vals[24];
  boys_table(m_max, p * pc.squaredNorm(), boys_vals);
  double sum = 0.0;
  for (int t = 0; t <= la[0] + lb[0]; ++t)
    for (int u = 0; u <= la[1] + lb[1]; ++u)
      for (int v = 0; v <= la[2] + lb[2]; ++v)
        sum += hermite_e(la[0], lb[0], t, A[0] - B[0], a, b) *
               hermite_e(la[1], lb[1], u, A[1] - B[1], a, b) *
               hermite_e(la[2], lb[2], v, A[2] - B[2], a, b) *
               hermite_r(t, u, v, 0, p, pc, boys_vals);
  return 2.0 * M_PI / p * sum;
}

double repulsion_prim(double a, const std::array<int, 3>& la,
                      const Eigen::Vector3d& A, double b,
                      const std::array<int, 3>& lb, const Eigen::Vector3d& B,
                      double c, const std::array<int, 3>& lc,
                      const Eigen::Vector3d& C, double d,
                      const std::array<int, 3>& ld, const Eigen::Vector3d& D) {
  double p = a + b;
  double q = c + d;
  double alpha = p * q / (p + q);
  Eigen::Vector3d P = (a * A + b * B) / p;
  Eigen::Vector3d Q = (c * C + d * D) / q;
  Eigen::Vector3d pq = P - Q;
  int m_max = la[0] + la[1] + la[2] + lb[0] + lb[1] + lb[2] + lc[0] + lc[1] +
              lc[2] + ld[0] + ld[1] + ld[2];
  double boys_vals[24];
  boys_table(m_max, alpha * pq.squaredNorm(), boys_vals);

  double e1[3][5], e2[3][5];
  for (int dim = 0; dim < 3; ++dim) {
    for (int t = 0; t <= la[dim] + lb[dim]; ++t)
      e1[dim][t] = hermite_e(la[dim], lb[dim], t, A[dim] - B[dim], a, b);
    for (int t = 0; t <= lc[dim] + ld[dim]; ++t)
      e2[dim][t] = hermite_e(lc[dim], ld[dim], t, C[dim] - D[dim], c, d);
  }

  double sum = 0.0;
  for (int t = 0; t <= la[0] + lb[0]; ++t)
    for (int u = 0; u <= la[1] + lb[1]; ++u)
      for (int v = 0; v <= la[2] + lb[2]; ++v) {
        double eb = e1[0][t] * e1[1][u] * e1[2][v];
        if (eb == 0.0) continue;
        for (int tt = 0; tt <= lc[0] + ld[0]; ++tt)
          for (int uu = 0; uu <= lc[1] + ld[1]; ++uu)
            for (int vv = 0; vv <= lc[2] + ld[2]; ++vv) {
              double ek = e2[0][tt] * e2[1][uu] * e2[2][vv];
              if (ek == 0.0) continue;
              double sign = ((tt + uu + vv) % 2) ? -1.0 : 1.0;
              sum += eb * ek * sign *
                     hermite_r(t + tt, u + uu, v + vv, 0, alpha, pq,
                               boys_vals);
            }
      }
  return two_pi_pow_2_5 / (p * q * std::sqrt(p + q)) * sum;
}

template <typename F>
double contract2(const AOFunction& fa, const AOFunction& fb, F&& prim) {
  double sum = 0.0;
  for (std::size_t i = 0; i < fa.exponents.size(); ++i)
    for (std::size_t j = 0; j < fb.exponents.size(); ++j)
      sum += fa.coefficients[i] * fb.coefficients[j] *
             prim(fa.exponents[i], fb.exponents[j]);
  return sum;
}

} // namespace

double boys(int m, double x) {
  if (m < 0 || m > 16) throw std::invalid_argument("boys: order out of range");
  if (x < 0.0) throw std::invalid_argument("boys: negative argument");
  double table[17];
  boys_table(m, x, table);
  return table[m];
}

double overlap(const AOFunction& a, const AOFunction& b) {
  return contract2(a, b, [&](double za, double zb) {
    return overlap_prim(za, a.powers, a.center, zb, b.powers, b.center);
  });
}

double kinetic(const AOFunction& a, const AOFunction& b) {
  return contract2(a, b, [&](double za, double zb) {
    return kinetic_prim(za, a.powers, a.center, zb, b.powers, b.center);
  });
}

double nuclear_attraction(const AOFunction& a, const AOFunction& b,
                          const std::vector<Atom>& atoms) {
  double sum = 0.0;
  for (const auto& atom : atoms) {
    sum -= atom.charge *
           contract2(a, b, [&](double za, double zb) {
             return coulomb_prim(za, a.powers, a.center, zb, b.powers,
                                 b.center, atom.position);
           });
  }
  return sum;
}

double repulsion(const AOFunction& a, const AOFunction& b,
                 const AOFunction& c, const AOFunction& d) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.exponents.size(); ++i)
    for (std::size_t j = 0; j < b.exponents.size(); ++j)
      for (std::size_t k = 0; k < c.exponents.size(); ++k)
        for (std::size_t l = 0; l < d.exponents.size(); ++l)
          sum += a.coefficients[i] * b.coefficients[j] * c.coefficients[k] *
                 d.coefficients[l] *
                 repulsion_prim(a.exponents[i], a.powers, a.center,
                                b.exponents[j], b.powers, b.center,
                                c.exponents[k], c.powers, c.center,
                                d.exponents[l], d.powers, d.center);
  return sum;
}

IntegralSet IntegralSet::compute(const AOBasis& basis, const Molecule& mol) {
  const auto& f = basis.functions;
  const std::size_t m = f.size();
  IntegralSet out;
  out.S = Mat::Zero(m, m);
  out.T = Mat::Zero(m, m);
  out.V = Mat::Zero(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      out.S(i, j) = out.S(j, i) = overlap(f[i], f[j]);
      out.T(i, j) = out.T(j, i) = kinetic(f[i], f[j]);
      out.V(i, j) = out.V(j, i) = nuclear_attraction(f[i], f[j], mol.atoms);
    }
  }
  out.hcore = out.T + out.V;

  out.eri = EriTensor(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = 0; k <= i; ++k)
        for (std::size_t l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          double val = repulsion(f[i], f[j], f[k], f[l]);
          out.eri(i, j, k, l) = val;
          out.eri(j, i, k, l) = val;
          out.eri(i, j, l, k) = val;
          out.eri(j, i, l, k) = val;
          out.eri(k, l, i, j) = val;
          out.eri(l, k, i, j) = val;
          out.eri(k, l, j, i) = val;
          out.eri(l, k, j, i) = val;
        }
  return out;
}

void IntegralSet::dump(std::ostream& os) const {
  const std::size_t m = size();
  char buf[128];
  os << "integrals " << m << "\n";
  auto put = [&](const char* tag, std::size_t i, std::size_t j, double v) {
    std::snprintf(buf, sizeof(buf), "%s %zu %zu % .17g\n", tag, i, j, v);
    os << buf;
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) put("S", i, j, S(i, j));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) put("T", i, j, T(i, j));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) put("V", i, j, V(i, j));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = 0; k <= i; ++k)
        for (std::size_t l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          std::snprintf(buf, sizeof(buf), "ERI %zu %zu %zu %zu % .17g\n", i,
                        j, k, l, eri(i, j, k, l));
          os << buf;
        }
}

} // namespace idmft
