#include "idmft/system.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace idmft {

namespace {

const std::map<std::string, int>& charge_table() {
  static const std::map<std::string, int> table = {
      {"H", 1},  {"He", 2}, {"Li", 3}, {"Be", 4}, {"B", 5},
      {"C", 6},  {"N", 7},  {"O", 8},  {"F", 9},  {"Ne", 10},
  };
  return table;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& token, int line) {
  std::string t = token;
  for (auto& c : t)
    if (c == 'D' || c == 'd') c = 'E';
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw BasisParseError("malformed number '" + token + "'", line);
  }
  if (pos != t.size())
    throw BasisParseError("malformed number '" + token + "'", line);
  return v;
}

double double_factorial(int n) {
  double v = 1.0;
  for (int k = n; k > 1; k -= 2) v *= k;
  return v;
}

/// Overlap of two primitives with the same center and the same Cartesian
/// powers; used only for contraction normalization.
double same_center_overlap(double a, double b, const std::array<int, 3>& pw) {
  double p = a + b;
  double s = std::pow(M_PI / p, 1.5);
  for (int d = 0; d < 3; ++d)
    s *= double_factorial(2 * pw[d] - 1) / std::pow(2.0 * p, pw[d]);
  return s;
}

} // namespace

int element_charge(const std::string& symbol) {
  auto it = charge_table().find(symbol);
  if (it == charge_table().end())
    throw std::invalid_argument("unknown element symbol '" + symbol + "'");
  return it->second;
}

int Molecule::n_electrons() const {
  int z = 0;
  for (const auto& a : atoms) z += a.charge;
  return z - net_charge;
}

double Molecule::nuclear_repulsion() const {
  double v = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      double r = (atoms[i].position - atoms[j].position).norm();
      if (r < 1e-10)
        throw std::invalid_argument("degenerate geometry: atoms " +
                                    std::to_string(i) + " and " +
                                    std::to_string(j) + " coincide");
      v += double(atoms[i].charge) * double(atoms[j].charge) / r;
    }
  }
  return v;
}

Molecule Molecule::diatomic(const std::string& element_a,
                            const std::string& element_b,
                            double separation_bohr, int net_charge) {
  Molecule mol;
  mol.net_charge = net_charge;
  mol.atoms.push_back(
      {element_a, element_charge(element_a), {0.0, 0.0, 0.0}});
  mol.atoms.push_back(
      {element_b, element_charge(element_b), {0.0, 0.0, separation_bohr}});
  return mol;
}

Molecule parse_geometry(const std::string& text) {
  Molecule mol;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq != std::string::npos) {
      std::string key = trim(t.substr(0, eq));
      std::string val = trim(t.substr(eq + 1));
      if (key != "charge")
        throw std::runtime_error("geometry line " + std::to_string(lineno) +
                                 ": unknown key '" + key + "'");
      try {
        std::size_t pos = 0;
        mol.net_charge = std::stoi(val, &pos);
        if (pos != val.size()) throw std::invalid_argument(val);
      } catch (const std::exception&) {
        throw std::runtime_error("geometry line " + std::to_string(lineno) +
                                 ": malformed charge '" + val + "'");
      }
      continue;
    }
    auto tok = split_ws(t);
    if (tok.size() != 4)
      throw std::runtime_error("geometry line " + std::to_string(lineno) +
                               ": expected '<element> <x> <y> <z>', got '" +
                               t + "'");
    Atom atom;
    atom.element = tok[0];
    try {
      atom.charge = element_charge(tok[0]);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("geometry line " + std::to_string(lineno) +
                               ": " + e.what());
    }
    for (int d = 0; d < 3; ++d) {
      try {
        std::size_t pos = 0;
        atom.position[d] = std::stod(tok[1 + d], &pos) * angstrom_to_bohr;
        if (pos != tok[1 + d].size()) throw std::invalid_argument(tok[1 + d]);
      } catch (const std::exception&) {
        throw std::runtime_error("geometry line " + std::to_string(lineno) +
                                 ": malformed coordinate '" + tok[1 + d] +
                                 "'");
      }
    }
    mol.atoms.push_back(atom);
  }
  if (mol.atoms.empty()) throw std::runtime_error("geometry file has no atoms");
  return mol;
}

Molecule read_geometry_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open geometry file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_geometry(ss.str());
}

BasisParseError::BasisParseError(const std::string& what, int line)
    : std::runtime_error(line >= 0 ? "basis line " + std::to_string(line) +
                                         ": " + what
                                   : what),
      line_number(line) {}

ShellLibrary parse_basis(const std::string& text) {
  ShellLibrary lib;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  std::string element;          // empty when between element blocks
  std::vector<ContractedShell> shells;
  int pending = 0;              // primitive lines still expected
  double scale_sq = 1.0;        // scale factor squared for the open shell
  ContractedShell current;

  auto close_element = [&]() {
    if (pending > 0)
      throw BasisParseError("unexpected end of shell for element '" + element +
                            "'", lineno);
    if (element.empty()) return;
    if (shells.empty())
      throw BasisParseError("element '" + element + "' has no shells", lineno);
    if (lib.count(element))
      throw BasisParseError("duplicate element block '" + element + "'",
                            lineno);
    lib[element] = shells;
    element.clear();
    shells.clear();
  };

  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '!' || t[0] == '#') continue;
    if (t == "****") {
      close_element();
      continue;
    }
    auto tok = split_ws(t);
    if (pending > 0) {
      if (tok.size() != 2)
        throw BasisParseError("expected '<exponent> <coefficient>', got '" +
                              t + "'", lineno);
      current.exponents.push_back(scale_sq * parse_number(tok[0], lineno));
      current.coefficients.push_back(parse_number(tok[1], lineno));
      if (--pending == 0) shells.push_back(current);
      continue;
    }
    if (element.empty()) {
      if (tok.size() != 2)
        throw BasisParseError("expected '<element> 0' header, got '" + t + "'",
                              lineno);
      element = tok[0];
      continue;
    }
    // shell header
    if (tok.size() != 3)
      throw BasisParseError("expected '<L> <nprim> <scale>', got '" + t + "'",
                            lineno);
    std::string label = tok[0];
    for (auto& c : label) c = char(std::toupper(c));
    if (label == "S") current.l = 0;
    else if (label == "P") current.l = 1;
    else
      throw BasisParseError("unsupported angular momentum label '" + tok[0] +
                            "'", lineno);
    int nprim = 0;
    try {
      nprim = std::stoi(tok[1]);
    } catch (const std::exception&) {
      throw BasisParseError("malformed primitive count '" + tok[1] + "'",
                            lineno);
    }
    if (nprim <= 0)
      throw BasisParseError("primitive count must be positive", lineno);
    double scale = parse_number(tok[2], lineno);
    if (scale <= 0.0)
      throw BasisParseError("scale factor must be positive", lineno);
    current.exponents.clear();
    current.coefficients.clear();
    current.exponents.reserve(nprim);
    scale_sq = scale * scale;
    pending = nprim;
    continue;
  }
  close_element();
  if (lib.empty()) throw BasisParseError("no element blocks found");
  return lib;
}

std::string serialize_basis(const ShellLibrary& lib) {
  std::ostringstream out;
  char buf[96];
  for (const auto& [element, shells] : lib) {
    out << element << "     0\n";
    for (const auto& sh : shells) {
      out << (sh.l == 0 ? "S" : "P") << "   " << sh.exponents.size()
          << "   1.00\n";
      for (std::size_t k = 0; k < sh.exponents.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "      %.17g           %.17g\n",
                      sh.exponents[k], sh.coefficients[k]);
        out << buf;
      }
    }
    out << "****\n";
  }
  return out.str();
}

AOBasis build_ao_basis(const Molecule& mol, const ShellLibrary& lib) {
  AOBasis basis;
  for (std::size_t ia = 0; ia < mol.atoms.size(); ++ia) {
    const Atom& atom = mol.atoms[ia];
    auto it = lib.find(atom.element);
    if (it == lib.end())
      throw std::invalid_argument("no basis functions for element '" +
                                  atom.element + "'");
    for (const auto& sh : it->second) {
      std::vector<std::array<int, 3>> components;
      if (sh.l == 0) {
        components = {{0, 0, 0}};
      } else if (sh.l == 1) {
        components = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
      } else {
        throw std::invalid_argument("angular momentum beyond p is not supported");
      }
      for (const auto& pw : components) {
        AOFunction f;
        f.atom = int(ia);
        f.center = atom.position;
        f.powers = pw;
        f.exponents = sh.exponents;
        f.coefficients.resize(sh.coefficients.size());
        // fold primitive norms into the contraction coefficients
        for (std::size_t k = 0; k < sh.exponents.size(); ++k) {
          double a = sh.exponents[k];
          double norm = std::pow(2.0 * a / M_PI, 0.75) *
                        std::pow(4.0 * a, 0.5 * (pw[0] + pw[1] + pw[2]));
          norm /= std::sqrt(double_factorial(2 * pw[0] - 1) *
                            double_factorial(2 * pw[1] - 1) *
                            double_factorial(2 * pw[2] - 1));
          f.coefficients[k] = sh.coefficients[k] * norm;
        }
        // renormalize the contraction to unit self-overlap
        double s = 0.0;
        for (std::size_t k = 0; k < f.exponents.size(); ++k)
          for (std::size_t l = 0; l < f.exponents.size(); ++l)
            s += f.coefficients[k] * f.coefficients[l] *
                 same_center_overlap(f.exponents[k], f.exponents[l], pw);
        double inv = 1.0 / std::sqrt(s);
        for (auto& c : f.coefficients) c *= inv;
        basis.functions.push_back(std::move(f));
      }
    }
  }
  return basis;
}

} // namespace idmft
