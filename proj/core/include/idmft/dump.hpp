#pragma once

#include "idmft/analysis.hpp"

#include <iosfwd>
#include <map>
#include <string>

namespace idmft {

/// Portable text snapshot of a converged calculation: enough to rebuild
/// the one-particle density and compare runs across invocations.
struct CalculationDump {
  std::string method;          ///< "hf", "fci", "idmft" or "idmft-ex"
  Molecule molecule;
  std::string basis_label;
  EntropicParams params;       ///< meaningful for the idmft methods
  double energy = 0.0;
  OrbitalDensity density;      ///< spin-summed occupations
  std::map<std::string, double> extras;  ///< mu, entropy, exchange, ...

  bool compatible_with(const CalculationDump& other) const;
};

/// Line-oriented text format with full-precision numbers.
void write_dump(std::ostream& os, const CalculationDump& dump);
CalculationDump read_dump(std::istream& is);

CalculationDump read_dump_file(const std::string& path);
void write_dump_file(const std::string& path, const CalculationDump& dump);

} // namespace idmft
