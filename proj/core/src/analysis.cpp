#include "idmft/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace idmft {

DensityDistance frobenius_distance(const OrbitalDensity& a,
                                   const OrbitalDensity& b, const Mat& s_ao) {
  if (a.coeffs.rows() != b.coeffs.rows() || a.coeffs.rows() != s_ao.rows())
    throw std::invalid_argument(
        "frobenius_distance: densities live in different bases");

  Mat ga = density_matrix(a.coeffs, a.occupations);
  Mat gb = density_matrix(b.coeffs, b.occupations);
  Mat d = (ga - gb) * s_ao;
  DensityDistance out;
  out.frobenius = std::sqrt((d * d).trace());

  out.sum_sq_a = a.occupations.array().square().sum();
  out.sum_sq_b = b.occupations.array().square().sum();
  Mat cross = a.coeffs.transpose() * s_ao * b.coeffs;  // <k|m>
  double c = 0.0;
  for (Eigen::Index k = 0; k < a.occupations.size(); ++k)
    for (Eigen::Index m = 0; m < b.occupations.size(); ++m)
      c += a.occupations(k) * b.occupations(m) * cross(k, m) * cross(k, m);
  out.cross = 2.0 * c;

  std::vector<double> na(a.occupations.data(),
                         a.occupations.data() + a.occupations.size());
  std::vector<double> nb(b.occupations.data(),
                         b.occupations.data() + b.occupations.size());
  std::sort(na.begin(), na.end(), std::greater<>());
  std::sort(nb.begin(), nb.end(), std::greater<>());
  std::size_t n = std::max(na.size(), nb.size());
  na.resize(n, 0.0);
  nb.resize(n, 0.0);
  double dist = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    dist += (na[i] - nb[i]) * (na[i] - nb[i]);
  out.occupation_distance = std::sqrt(dist);
  return out;
}

LinearFit linear_fit(const std::vector<std::pair<double, double>>& points) {
  const std::size_t n = points.size();
  if (n < 3)
    throw std::invalid_argument("linear_fit needs at least three points");
  double sx = 0, sy = 0;
  for (auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  double mx = sx / double(n), my = sy / double(n);
  double sxx = 0, syy = 0, sxy = 0;
  for (auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw std::invalid_argument("linear_fit: degenerate point set");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.correlation = sxy / std::sqrt(sxx * syy);
  fit.residuals.reserve(n);
  for (auto& [x, y] : points)
    fit.residuals.push_back(y - (fit.slope * x + fit.intercept));
  return fit;
}

std::vector<ScanPoint> dissociation_scan(const ScanRequest& req) {
  if (req.diatomic.atoms.size() != 2)
    throw std::invalid_argument("dissociation_scan requires a diatomic");
  if (req.with_idmft) req.params.validate();

  std::vector<ScanPoint> out;
  out.reserve(req.r_angstrom.size());
  for (double r : req.r_angstrom) {
    ScanPoint pt;
    pt.r_angstrom = r;
    Molecule mol = Molecule::diatomic(req.diatomic.atoms[0].element,
                                      req.diatomic.atoms[1].element,
                                      r * angstrom_to_bohr,
                                      req.diatomic.net_charge);
    try {
      AOBasis basis = build_ao_basis(mol, req.basis);
      IntegralSet ints = IntegralSet::compute(basis, mol);
      ScfResult hf = rhf_scf(mol, ints, req.scf);
      if (req.with_hf) pt.e_hf = hf.energy;
      if (req.with_ci) {
        MOIntegrals mo =
            ao_to_mo(ints, hf.orbitals.coeffs, mol.nuclear_repulsion());
        CIResult ci = fci_singlet(mo, mol.n_electrons());
        CumulantBreakdown cb = cumulant_energy(ci, ints);
        pt.e_ci = ci.energy;
        pt.s = cb.s;
        pt.e_cum = cb.e_cum;
      }
      if (req.with_idmft)
        pt.e_idmft = idmft_scf(mol, ints, req.params, req.scf).energy;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    out.push_back(pt);
  }
  return out;
}

namespace {

std::string format_value(const std::optional<double>& v, bool full) {
  if (!v) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), full ? "%.17g" : "%.6f", *v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

} // namespace

void write_scan_csv(std::ostream& os, const std::vector<ScanPoint>& points,
                    bool full_precision) {
  os << "R,S,E_cum,E_HF,E_CI,E_iDMFT,error\n";
  char rbuf[40];
  for (const auto& p : points) {
    std::snprintf(rbuf, sizeof(rbuf), full_precision ? "%.17g" : "%.6f",
                  p.r_angstrom);
    os << rbuf << ',' << format_value(p.s, full_precision) << ','
       << format_value(p.e_cum, full_precision) << ','
       << format_value(p.e_hf, full_precision) << ','
       << format_value(p.e_ci, full_precision) << ','
       << format_value(p.e_idmft, full_precision) << ','
       << csv_quote(p.error) << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::optional<double> parse_optional(const std::string& s, int line) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("scan csv line " + std::to_string(line) +
                             ": malformed number '" + s + "'");
  }
}

} // namespace

std::vector<ScanPoint> parse_scan_csv(std::istream& is) {
  std::string line;
  int lineno = 0;
  // leading '#' lines carry run provenance and are skipped
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') continue;
    have_header = true;
    break;
  }
  if (!have_header) throw std::runtime_error("scan csv: empty input");
  if (line != "R,S,E_cum,E_HF,E_CI,E_iDMFT,error")
    throw std::runtime_error("scan csv: unexpected header '" + line + "'");

  std::vector<ScanPoint> out;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto f = split_csv_line(line);
    if (f.size() != 7)
      throw std::runtime_error("scan csv line " + std::to_string(lineno) +
                               ": expected 7 fields, got " +
                               std::to_string(f.size()));
    ScanPoint p;
    auto r = parse_optional(f[0], lineno);
    if (!r)
      throw std::runtime_error("scan csv line " + std::to_string(lineno) +
                               ": missing R");
    p.r_angstrom = *r;
    p.s = parse_optional(f[1], lineno);
    p.e_cum = parse_optional(f[2], lineno);
    p.e_hf = parse_optional(f[3], lineno);
    p.e_ci = parse_optional(f[4], lineno);
    p.e_idmft = parse_optional(f[5], lineno);
    p.error = f[6];
    out.push_back(p);
  }
  return out;
}

ParamFit fit_params(const ScanRequest& req,
                    const std::vector<double>* reference_energies) {
  if (req.diatomic.atoms.size() != 2)
    throw std::invalid_argument("fit_params requires a diatomic");
  const std::size_t nr = req.r_angstrom.size();
  if (nr < 2)
    throw std::invalid_argument("fit_params needs at least two separations");
  if (reference_energies && reference_energies->size() != nr)
    throw std::invalid_argument(
        "fit_params: reference energies do not match the separations");

  // cache integrals per geometry; compute CI references when not supplied
  struct Geometry {
    Molecule mol;
    IntegralSet ints;
    double reference = 0.0;
    bool usable = true;
  };
  std::vector<Geometry> geoms;
  geoms.reserve(nr);
  int n_failed = 0;
  for (std::size_t i = 0; i < nr; ++i) {
    Molecule mol = Molecule::diatomic(req.diatomic.atoms[0].element,
                                      req.diatomic.atoms[1].element,
                                      req.r_angstrom[i] * angstrom_to_bohr,
                                      req.diatomic.net_charge);
    Geometry g{mol, {}, 0.0, true};
    try {
      AOBasis basis = build_ao_basis(mol, req.basis);
      g.ints = IntegralSet::compute(basis, mol);
      if (reference_energies) {
        g.reference = (*reference_energies)[i];
      } else {
        ScfResult hf = rhf_scf(mol, g.ints, req.scf);
        MOIntegrals mo =
            ao_to_mo(g.ints, hf.orbitals.coeffs, mol.nuclear_repulsion());
        g.reference = fci_singlet(mo, mol.n_electrons()).energy;
      }
    } catch (const std::exception&) {
      g.usable = false;
      ++n_failed;
    }
    geoms.push_back(std::move(g));
  }

  // unshifted energies at a probe kappa; geometries that fail are dropped
  // from the whole fit so every kappa sees the same point set
  auto unshifted = [&](double kappa, std::vector<double>& e0) {
    EntropicParams p;
    p.variant = EntropicVariant::fixed_kappa;
    p.kappa = kappa;
    p.b = 0.0;
    e0.assign(geoms.size(), 0.0);
    for (std::size_t i = 0; i < geoms.size(); ++i) {
      if (!geoms[i].usable) continue;
      try {
        e0[i] = idmft_scf(geoms[i].mol, geoms[i].ints, p, req.scf).energy;
      } catch (const std::exception&) {
        geoms[i].usable = false;
        ++n_failed;
      }
    }
  };

  auto objective = [&](const std::vector<double>& e0, double& b_opt) {
    double mean = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < geoms.size(); ++i)
      if (geoms[i].usable) {
        mean += e0[i] - geoms[i].reference;
        ++n;
      }
    if (n < 2)
      throw std::runtime_error(
          "fit_params: fewer than two usable geometries remain");
    b_opt = mean / double(n);
    double sse = 0.0;
    for (std::size_t i = 0; i < geoms.size(); ++i)
      if (geoms[i].usable) {
        double r = (e0[i] - geoms[i].reference) - b_opt;
        sse += r * r;
      }
    return sse;
  };

  const double k_lo = 0.005, k_hi = 0.25;
  const int n_grid = 50;
  const double spacing = (k_hi - k_lo) / double(n_grid - 1);
  std::vector<double> kappas(n_grid), sses(n_grid);
  int best = -1;

  // a geometry can still drop out during a grid pass; restart the pass so
  // every kappa is scored on the same point set
  for (int pass = 0; pass < 3; ++pass) {
    int failed_before = n_failed;
    best = -1;
    for (int i = 0; i < n_grid; ++i) {
      kappas[i] = k_lo + spacing * double(i);
      std::vector<double> e0;
      unshifted(kappas[i], e0);
      double b_opt;
      sses[i] = objective(e0, b_opt);
      if (best < 0 || sses[i] < sses[best]) best = i;
    }
    if (n_failed == failed_before) break;
  }

  // parabolic refinement on the equally spaced neighbors of the best point
  double kappa = kappas[best];
  if (best > 0 && best + 1 < n_grid) {
    double y0 = sses[best - 1], y1 = sses[best], y2 = sses[best + 1];
    double denom = y0 - 2.0 * y1 + y2;
    if (denom > 0.0) {
      double vertex = kappas[best] - 0.5 * spacing * (y2 - y0) / denom;
      if (vertex > kappas[best - 1] && vertex < kappas[best + 1])
        kappa = vertex;
    }
  }

  std::vector<double> e0;
  unshifted(kappa, e0);
  ParamFit fit;
  fit.kappa = kappa;
  double sse = objective(e0, fit.b);
  fit.n_points = 0;
  for (const auto& g : geoms)
    if (g.usable) ++fit.n_points;
  fit.n_failed = n_failed;
  fit.rms = std::sqrt(sse / double(fit.n_points));
  return fit;
}

} // namespace idmft
