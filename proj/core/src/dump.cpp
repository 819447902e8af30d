#include "idmft/dump.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace idmft {

bool CalculationDump::compatible_with(const CalculationDump& other) const {
  if (molecule.atoms.size() != other.molecule.atoms.size()) return false;
  if (molecule.net_charge != other.molecule.net_charge) return false;
  for (std::size_t i = 0; i < molecule.atoms.size(); ++i) {
    if (molecule.atoms[i].element != other.molecule.atoms[i].element)
      return false;
    if ((molecule.atoms[i].position - other.molecule.atoms[i].position)
            .norm() > 1e-9)
      return false;
  }
  return density.coeffs.rows() == other.density.coeffs.rows();
}

namespace {

const char* variant_name(EntropicVariant v) {
  return v == EntropicVariant::fixed_kappa ? "fixed_kappa"
                                           : "exchange_weighted";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

void write_dump(std::ostream& os, const CalculationDump& dump) {
  os << "calculation 1\n";
  os << "method " << dump.method << "\n";
  os << "atoms " << dump.molecule.atoms.size() << "\n";
  for (const auto& a : dump.molecule.atoms)
    os << a.element << ' ' << a.charge << ' ' << fmt(a.position[0]) << ' '
       << fmt(a.position[1]) << ' ' << fmt(a.position[2]) << "\n";
  os << "charge " << dump.molecule.net_charge << "\n";
  os << "basis " << dump.basis_label << "\n";
  os << "variant " << variant_name(dump.params.variant) << "\n";
  os << "kappa " << fmt(dump.params.kappa) << "\n";
  os << "a " << fmt(dump.params.a) << "\n";
  os << "b " << fmt(dump.params.b) << "\n";
  os << "energy " << fmt(dump.energy) << "\n";
  const Eigen::Index m = dump.density.occupations.size();
  os << "orbitals " << m << "\n";
  os << "occupations";
  for (Eigen::Index i = 0; i < m; ++i)
    os << ' ' << fmt(dump.density.occupations(i));
  os << "\n";
  for (Eigen::Index k = 0; k < dump.density.coeffs.cols(); ++k) {
    os << "orbital " << k;
    for (Eigen::Index i = 0; i < dump.density.coeffs.rows(); ++i)
      os << ' ' << fmt(dump.density.coeffs(i, k));
    os << "\n";
  }
  for (const auto& [key, value] : dump.extras)
    os << "extra " << key << ' ' << fmt(value) << "\n";
  os << "end\n";
}

namespace {

struct LineReader {
  std::istream& is;
  int lineno = 0;

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(is, line)) {
      ++lineno;
      std::istringstream ls(line);
      tokens.clear();
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("dump line " + std::to_string(lineno) + ": " +
                             what);
  }

  std::vector<std::string> expect(const std::string& key,
                                  std::size_t min_tokens) {
    std::vector<std::string> tokens;
    if (!next(tokens)) fail("unexpected end of dump, wanted '" + key + "'");
    if (tokens[0] != key) fail("expected '" + key + "', got '" + tokens[0] + "'");
    if (tokens.size() < min_tokens)
      fail("'" + key + "' line is too short");
    return tokens;
  }

  double number(const std::string& tok) const {
    try {
      std::size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      fail("malformed number '" + tok + "'");
    }
  }

  long integer(const std::string& tok) const {
    try {
      std::size_t pos = 0;
      long v = std::stol(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      fail("malformed integer '" + tok + "'");
    }
  }
};

} // namespace

CalculationDump read_dump(std::istream& is) {
  LineReader r{is};
  CalculationDump d;

  auto header = r.expect("calculation", 2);
  if (r.integer(header[1]) != 1) r.fail("unsupported dump version");
  d.method = r.expect("method", 2)[1];

  long n_atoms = r.integer(r.expect("atoms", 2)[1]);
  if (n_atoms <= 0) r.fail("atom count must be positive");
  for (long i = 0; i < n_atoms; ++i) {
    std::vector<std::string> t;
    if (!r.next(t)) r.fail("unexpected end of dump in atom list");
    if (t.size() != 5) r.fail("expected '<element> <Z> <x> <y> <z>'");
    Atom a;
    a.element = t[0];
    a.charge = int(r.integer(t[1]));
    a.position = {r.number(t[2]), r.number(t[3]), r.number(t[4])};
    d.molecule.atoms.push_back(a);
  }
  d.molecule.net_charge = int(r.integer(r.expect("charge", 2)[1]));
  auto basis = r.expect("basis", 2);
  d.basis_label = basis[1];
  auto variant = r.expect("variant", 2)[1];
  if (variant == "fixed_kappa")
    d.params.variant = EntropicVariant::fixed_kappa;
  else if (variant == "exchange_weighted")
    d.params.variant = EntropicVariant::exchange_weighted;
  else
    r.fail("unknown variant '" + variant + "'");
  d.params.kappa = r.number(r.expect("kappa", 2)[1]);
  d.params.a = r.number(r.expect("a", 2)[1]);
  d.params.b = r.number(r.expect("b", 2)[1]);
  d.energy = r.number(r.expect("energy", 2)[1]);

  long m = r.integer(r.expect("orbitals", 2)[1]);
  if (m <= 0) r.fail("orbital count must be positive");
  auto occ = r.expect("occupations", std::size_t(m) + 1);
  if (occ.size() != std::size_t(m) + 1)
    r.fail("occupation count does not match 'orbitals'");
  d.density.occupations = Vec(m);
  for (long i = 0; i < m; ++i)
    d.density.occupations(i) = r.number(occ[std::size_t(i) + 1]);

  d.density.coeffs = Mat(m, m);
  for (long k = 0; k < m; ++k) {
    auto row = r.expect("orbital", std::size_t(m) + 2);
    if (r.integer(row[1]) != k) r.fail("orbital rows out of order");
    if (row.size() != std::size_t(m) + 2)
      r.fail("orbital row has wrong length");
    for (long i = 0; i < m; ++i)
      d.density.coeffs(i, k) = r.number(row[std::size_t(i) + 2]);
  }

  std::vector<std::string> t;
  while (r.next(t)) {
    if (t[0] == "end") return d;
    if (t[0] == "extra" && t.size() == 3) {
      d.extras[t[1]] = r.number(t[2]);
      continue;
    }
    r.fail("unexpected line '" + t[0] + "'");
  }
  r.fail("missing 'end'");
}

CalculationDump read_dump_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open dump file '" + path + "'");
  return read_dump(f);
}

void write_dump_file(const std::string& path, const CalculationDump& dump) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write dump file '" + path + "'");
  write_dump(f, dump);
}

} // namespace idmft
