#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace idmft::cli {

/// Everything a run needs, resolved from flags and an optional config file.
struct RunConfig {
  std::string method;            ///< hf, fci, idmft, idmft-ex, scan, fit, compare
  std::string geometry_file;
  std::string elements;          ///< inline diatomic, e.g. "He H"
  int charge = 0;
  std::vector<double> r_angstrom;
  double kappa = 0.0;
  double a = 0.0;
  double b = 0.0;
  std::string basis = "cc-pVDZ";
  std::string output;            ///< empty or "-" means stdout
  std::string dump_file;
  std::string integrals_file;
  std::string methods = "hf,fci,idmft";  ///< scan columns
  bool full_precision = false;
  bool verbose = false;
  int max_iter = 500;
  std::vector<std::string> compare_files;
};

/// Exit codes: 0 success, 1 failed computation, 2 usage error.
inline constexpr int exit_ok = 0;
inline constexpr int exit_compute_error = 1;
inline constexpr int exit_usage_error = 2;

/// Parse arguments (argv[1:]) and run.  Primary output goes to `out` unless
/// an output file is requested; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

} // namespace idmft::cli
