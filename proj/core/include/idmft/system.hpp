#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace idmft {

/// Conversion factor from angstrom to bohr (CODATA).
inline constexpr double angstrom_to_bohr = 1.8897259886;

/// Nuclear charge for a supported element symbol.  Throws
/// std::invalid_argument for unknown symbols.
int element_charge(const std::string& symbol);

struct Atom {
  std::string element;
  int charge = 0;              ///< nuclear charge Z
  Eigen::Vector3d position;    ///< bohr
};

struct Molecule {
  std::vector<Atom> atoms;
  int net_charge = 0;

  int n_electrons() const;
  /// Sum of Z_A Z_B / R_AB over nuclear pairs.  Throws std::invalid_argument
  /// if two nuclei coincide.
  double nuclear_repulsion() const;

  /// Build a diatomic placed along z with the first atom at the origin.
  static Molecule diatomic(const std::string& element_a,
                           const std::string& element_b,
                           double separation_bohr, int net_charge = 0);
};

/// Parse a geometry file: one "<element> <x> <y> <z>" line per atom with
/// coordinates in angstrom, plus an optional "charge=<int>" line.
/// Throws std::runtime_error naming the offending line on malformed input.
Molecule parse_geometry(const std::string& text);
Molecule read_geometry_file(const std::string& path);

/// One contracted shell of Gaussian primitives for an element.
struct ContractedShell {
  int l = 0;                          ///< angular momentum (0 = s, 1 = p, ...)
  std::vector<double> exponents;
  std::vector<double> coefficients;   ///< contraction coefficients as given

  bool operator==(const ContractedShell&) const = default;
};

/// Shells per element symbol, as read from a basis set file.
using ShellLibrary = std::map<std::string, std::vector<ContractedShell>>;

struct BasisParseError : std::runtime_error {
  explicit BasisParseError(const std::string& what, int line = -1);
  int line_number;
};

/// Parse a basis set in the common "element block" text format:
///   <Element>  0
///   <L> <nprim> <scale>
///     <exponent>  <coefficient>
///   ...
///   ****
/// Fortran D exponents are accepted.  Only s and p shells are supported;
/// unknown angular momentum labels raise BasisParseError with the line
/// number.  Scale factors multiply the exponents by scale^2.
ShellLibrary parse_basis(const std::string& text);

/// Serialize a shell library back to the block text format with full
/// precision, such that parse_basis(serialize_basis(lib)) == lib.
std::string serialize_basis(const ShellLibrary& lib);

/// Built-in cc-pVDZ basis text for H and He.
const std::string& builtin_ccpvdz();

/// A single contracted Cartesian Gaussian basis function.
struct AOFunction {
  int atom = 0;                       ///< index into Molecule::atoms
  Eigen::Vector3d center;             ///< bohr
  std::array<int, 3> powers{0, 0, 0}; ///< Cartesian exponents (i, j, k)
  std::vector<double> exponents;
  std::vector<double> coefficients;   ///< includes primitive and contraction norms
};

struct AOBasis {
  std::vector<AOFunction> functions;
  std::size_t size() const { return functions.size(); }
};

/// Expand the shells for each atom of the molecule into normalized
/// Cartesian AO functions (1 per s shell, 3 per p shell, ordered x, y, z).
/// Throws std::invalid_argument naming any element missing from the library.
AOBasis build_ao_basis(const Molecule& mol, const ShellLibrary& lib);

} // namespace idmft
