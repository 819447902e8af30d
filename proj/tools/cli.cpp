#include "cli.hpp"

#include "idmft/analysis.hpp"
#include "idmft/dump.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace idmft::cli {

namespace {

constexpr const char* version_string = "idmft 0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_r_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("malformed separation '" + item + "' in R list");
    }
    if (out.back() <= 0.0)
      throw UsageError("separations must be positive, got '" + item + "'");
  }
  if (out.empty()) throw UsageError("empty R list");
  return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) +
                       ": expected 'key = value', got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw UsageError("config line " + std::to_string(lineno) +
                       ": empty key");
    if (kv.count(key))
      throw UsageError("config line " + std::to_string(lineno) +
                       ": duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

double config_number(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': malformed number '" + value +
                     "'");
  }
}

bool config_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw UsageError("config key '" + key + "': expected a boolean, got '" +
                   value + "'");
}

void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "method") cfg.method = value;
    else if (key == "geometry") cfg.geometry_file = value;
    else if (key == "mol") cfg.elements = value;
    else if (key == "charge") cfg.charge = int(config_number(key, value));
    else if (key == "R") cfg.r_angstrom = parse_r_list(value);
    else if (key == "kappa") cfg.kappa = config_number(key, value);
    else if (key == "a") cfg.a = config_number(key, value);
    else if (key == "b") cfg.b = config_number(key, value);
    else if (key == "basis") cfg.basis = value;
    else if (key == "output") cfg.output = value;
    else if (key == "dump") cfg.dump_file = value;
    else if (key == "dump-integrals") cfg.integrals_file = value;
    else if (key == "methods") cfg.methods = value;
    else if (key == "full-precision") cfg.full_precision = config_bool(key, value);
    else if (key == "verbose") cfg.verbose = config_bool(key, value);
    else if (key == "max-iter") cfg.max_iter = int(config_number(key, value));
    else
      throw UsageError("config key '" + key + "' is not recognized");
  }
}

struct ResolvedBasis {
  ShellLibrary shells;
  std::string label;
  std::string origin;  ///< "builtin" or the file path
};

ResolvedBasis resolve_basis(const std::string& name) {
  ResolvedBasis rb;
  rb.label = name;
  if (name == "cc-pVDZ") {
    rb.shells = parse_basis(builtin_ccpvdz());
    rb.origin = "builtin";
    return rb;
  }
  namespace fs = std::filesystem;
  std::vector<std::string> candidates;
  candidates.push_back(name);
  if (const char* dir = std::getenv("IDMFT_BASIS_DIR")) {
    candidates.push_back((fs::path(dir) / name).string());
    candidates.push_back((fs::path(dir) / (name + ".gbs")).string());
  }
  for (const auto& path : candidates) {
    std::ifstream f(path);
    if (!f) continue;
    std::ostringstream ss;
    ss << f.rdbuf();
    rb.shells = parse_basis(ss.str());
    rb.origin = path;
    return rb;
  }
  throw UsageError("basis '" + name +
                   "' is neither built in nor a readable file (searched " +
                   std::to_string(candidates.size()) +
                   " locations; set IDMFT_BASIS_DIR for a search directory)");
}

Molecule make_molecule(const RunConfig& cfg, double r_angstrom) {
  if (!cfg.geometry_file.empty() && cfg.elements.empty()) {
    try {
      return read_geometry_file(cfg.geometry_file);
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
  }
  std::istringstream is(cfg.elements);
  std::string a, b, extra;
  if (!(is >> a >> b) || (is >> extra))
    throw UsageError("--mol expects two element symbols, got '" +
                     cfg.elements + "'");
  try {
    return Molecule::diatomic(a, b, r_angstrom * angstrom_to_bohr, cfg.charge);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

EntropicParams make_params(const RunConfig& cfg, const std::string& method) {
  EntropicParams p;
  p.b = cfg.b;
  if (method == "idmft") {
    p.variant = EntropicVariant::fixed_kappa;
    p.kappa = cfg.kappa;
    if (!(cfg.kappa > 0.0))
      throw UsageError("method 'idmft' requires --kappa > 0");
  } else {
    p.variant = EntropicVariant::exchange_weighted;
    p.a = cfg.a;
    if (!(cfg.a > 0.0))
      throw UsageError("method 'idmft-ex' requires --a > 0");
  }
  return p;
}

std::string format_energy(double v, bool full) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), full ? "%.17g" : "%.12f", v);
  return buf;
}

void print_header(std::ostream& os, const RunConfig& cfg,
                  const Molecule& mol, const ResolvedBasis& basis,
                  const std::string& config_path,
                  const std::vector<std::string>& overridden) {
  os << "# " << version_string << "\n";
  os << "# method: " << cfg.method << "\n";
  os << "# molecule:";
  for (const auto& a : mol.atoms) os << ' ' << a.element;
  os << "  charge=" << mol.net_charge << "\n";
  if (!cfg.geometry_file.empty())
    os << "# geometry file: " << cfg.geometry_file << "\n";
  if (!cfg.r_angstrom.empty()) {
    os << "# separations (A):";
    char buf[40];
    for (double r : cfg.r_angstrom) {
      std::snprintf(buf, sizeof(buf), " %g", r);
      os << buf;
    }
    os << "\n";
  }
  os << "# basis: " << basis.label << " (" << basis.origin << ")\n";
  os << "# entropy form: " << entropy_form_name(default_entropy_form) << "\n";
  if (cfg.method == "idmft" || (cfg.method == "scan" &&
                                cfg.methods.find("idmft") != std::string::npos))
    os << "# params: kappa=" << cfg.kappa << " b=" << cfg.b << "\n";
  if (cfg.method == "idmft-ex" ||
      (cfg.method == "scan" && cfg.methods.find("idmft-ex") != std::string::npos))
    os << "# params: a=" << cfg.a << " b=" << cfg.b << "\n";
  if (!config_path.empty()) {
    os << "# config file: " << config_path;
    if (!overridden.empty()) {
      os << " (command line overrides:";
      for (const auto& k : overridden) os << ' ' << k;
      os << ")";
    }
    os << "\n";
  }
}

void maybe_dump_integrals(const RunConfig& cfg, const IntegralSet& ints) {
  if (cfg.integrals_file.empty()) return;
  std::ofstream f(cfg.integrals_file);
  if (!f)
    throw std::runtime_error("cannot write integral dump '" +
                             cfg.integrals_file + "'");
  ints.dump(f);
}

void maybe_write_dump(const RunConfig& cfg, const CalculationDump& dump) {
  if (cfg.dump_file.empty()) return;
  write_dump_file(cfg.dump_file, dump);
}

int run_single(const RunConfig& cfg, const ResolvedBasis& basis,
               std::ostream& os) {
  if (cfg.r_angstrom.size() > 1)
    throw UsageError("method '" + cfg.method +
                     "' expects a single separation; use 'scan' for lists");
  if (!cfg.geometry_file.empty() && !cfg.r_angstrom.empty())
    throw UsageError("--R conflicts with --geometry for single points");
  double r = cfg.r_angstrom.empty() ? 0.0 : cfg.r_angstrom.front();
  if (cfg.geometry_file.empty() && cfg.r_angstrom.empty())
    throw UsageError("provide --R or a geometry file");
  Molecule mol = make_molecule(cfg, r);

  ScfOptions opt;
  opt.max_iter = cfg.max_iter;
  opt.verbose = cfg.verbose;
  const bool full = cfg.full_precision;

  AOBasis ao;
  try {
    ao = build_ao_basis(mol, basis.shells);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  IntegralSet ints = IntegralSet::compute(ao, mol);
  maybe_dump_integrals(cfg, ints);

  CalculationDump dump;
  dump.method = cfg.method;
  dump.molecule = mol;
  dump.basis_label = basis.label;

  auto put = [&](const char* key, double v) {
    os << key << ' ' << format_energy(v, full) << "\n";
  };

  if (cfg.method == "hf") {
    ScfResult hf = rhf_scf(mol, ints, opt);
    put("energy", hf.energy);
    os << "iterations " << hf.iterations << "\n";
    os << "orbital_energies";
    for (Eigen::Index i = 0; i < hf.orbitals.energies.size(); ++i)
      os << ' ' << format_energy(hf.orbitals.energies(i), full);
    os << "\n";
    dump.energy = hf.energy;
    dump.density = {hf.orbitals.coeffs, hf.orbitals.occupations};
    dump.extras["iterations"] = hf.iterations;
  } else if (cfg.method == "fci") {
    ScfResult hf = rhf_scf(mol, ints, opt);
    MOIntegrals mo = ao_to_mo(ints, hf.orbitals.coeffs, mol.nuclear_repulsion());
    CIResult ci = fci_singlet(mo, mol.n_electrons());
    CumulantBreakdown cb = cumulant_energy(ci, ints);
    put("energy", ci.energy);
    put("e_hf", hf.energy);
    put("correlation", ci.energy - hf.energy);
    put("entropy", cb.s);
    put("e_ee", cb.e_ee);
    put("y", cb.y);
    put("e_cum", cb.e_cum);
    os << "natural_occupations";
    for (Eigen::Index i = 0; i < ci.no_occupations.size(); ++i)
      os << ' ' << format_energy(2.0 * ci.no_occupations(i), full);
    os << "\n";
    dump.energy = ci.energy;
    dump.density = {ci.no_coeffs, Vec(2.0 * ci.no_occupations)};
    dump.extras["entropy"] = cb.s;
    dump.extras["e_cum"] = cb.e_cum;
  } else {
    EntropicParams params = make_params(cfg, cfg.method);
    IDMFTResult res = idmft_scf(mol, ints, params, opt);
    put("energy", res.energy);
    os << "iterations " << res.iterations << "\n";
    put("mu", res.mu);
    put("entropy", res.entropy_value);
    put("exchange", res.exchange);
    os << "occupations";
    for (Eigen::Index i = 0; i < res.orbitals.occupations.size(); ++i)
      os << ' ' << format_energy(res.orbitals.occupations(i), full);
    os << "\n";
    os << "orbital_energies";
    for (Eigen::Index i = 0; i < res.orbitals.energies.size(); ++i)
      os << ' ' << format_energy(res.orbitals.energies(i), full);
    os << "\n";
    os << "breakdown one_electron " << format_energy(res.breakdown.one_electron, full)
       << " y " << format_energy(res.breakdown.y, full) << " entropic "
       << format_energy(res.breakdown.entropic, full) << " shift "
       << format_energy(res.breakdown.shift, full) << " nuclear "
       << format_energy(res.breakdown.nuclear, full) << "\n";
    if (res.occupation_collapse)
      os << "warning all occupations collapsed to 0 or 1; the entropic term "
            "is inactive at this temperature\n";
    dump.energy = res.energy;
    dump.params = params;
    dump.density = {res.orbitals.coeffs, res.orbitals.occupations};
    dump.extras["mu"] = res.mu;
    dump.extras["entropy"] = res.entropy_value;
    dump.extras["exchange"] = res.exchange;
    dump.extras["iterations"] = res.iterations;
  }

  maybe_write_dump(cfg, dump);
  return exit_ok;
}

int run_scan(const RunConfig& cfg, const ResolvedBasis& basis,
             std::ostream& os) {
  if (cfg.r_angstrom.empty())
    throw UsageError("scan requires --R with at least one separation");
  ScanRequest req;
  req.diatomic = make_molecule(cfg, 1.0);
  if (req.diatomic.atoms.size() != 2)
    throw UsageError("scan requires a diatomic");
  req.r_angstrom = cfg.r_angstrom;
  req.basis = basis.shells;
  req.scf.max_iter = cfg.max_iter;
  req.scf.verbose = cfg.verbose;

  req.with_hf = req.with_ci = req.with_idmft = false;
  std::istringstream ms(cfg.methods);
  std::string tok;
  std::string idmft_method;
  while (std::getline(ms, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    if (tok == "hf") req.with_hf = true;
    else if (tok == "fci" || tok == "ci") req.with_ci = true;
    else if (tok == "idmft" || tok == "idmft-ex") {
      if (!idmft_method.empty() && idmft_method != tok)
        throw UsageError("scan accepts only one of idmft / idmft-ex");
      idmft_method = tok;
      req.with_idmft = true;
    } else {
      throw UsageError("unknown scan method '" + tok + "'");
    }
  }
  if (!req.with_hf && !req.with_ci && !req.with_idmft)
    throw UsageError("scan method list is empty");
  if (req.with_idmft) req.params = make_params(cfg, idmft_method);

  auto points = dissociation_scan(req);
  write_scan_csv(os, points, cfg.full_precision);

  bool any_failed = false;
  for (const auto& p : points)
    if (!p.error.empty()) any_failed = true;
  return any_failed ? exit_compute_error : exit_ok;
}

int run_fit(const RunConfig& cfg, const ResolvedBasis& basis,
            std::ostream& os) {
  if (cfg.r_angstrom.size() < 2)
    throw UsageError("fit requires --R with at least two separations");
  ScanRequest req;
  req.diatomic = make_molecule(cfg, 1.0);
  req.r_angstrom = cfg.r_angstrom;
  req.basis = basis.shells;
  req.scf.max_iter = cfg.max_iter;
  req.scf.verbose = cfg.verbose;

  ParamFit fit = fit_params(req);
  const bool full = cfg.full_precision;
  os << "kappa " << format_energy(fit.kappa, full) << "\n";
  os << "b " << format_energy(fit.b, full) << "\n";
  os << "rms " << format_energy(fit.rms, full) << "\n";
  os << "points " << fit.n_points << "\n";
  if (fit.n_failed > 0)
    os << "warning " << fit.n_failed
       << " geometries were dropped (SCF failures)\n";
  return exit_ok;
}

int run_compare(const RunConfig& cfg, std::ostream& os) {
  CalculationDump a = read_dump_file(cfg.compare_files[0]);
  CalculationDump b = read_dump_file(cfg.compare_files[1]);
  if (!a.compatible_with(b))
    throw std::runtime_error(
        "dumps describe different systems (geometry, charge or basis size "
        "mismatch); refusing to compare");

  std::string basis_name = cfg.basis;
  // prefer the label stored in the dumps when the flag was left at default
  if (basis_name == "cc-pVDZ" && a.basis_label == b.basis_label)
    basis_name = a.basis_label;
  ResolvedBasis basis = resolve_basis(basis_name);
  AOBasis ao = build_ao_basis(a.molecule, basis.shells);
  if (ao.size() != std::size_t(a.density.coeffs.rows()))
    throw std::runtime_error(
        "rebuilt basis size does not match the dumps; pass --basis");
  IntegralSet ints = IntegralSet::compute(ao, a.molecule);

  DensityDistance d = frobenius_distance(a.density, b.density, ints.S);
  const bool full = cfg.full_precision;
  os << "method_a " << a.method << "\n";
  os << "method_b " << b.method << "\n";
  os << "energy_a " << format_energy(a.energy, full) << "\n";
  os << "energy_b " << format_energy(b.energy, full) << "\n";
  os << "energy_difference " << format_energy(a.energy - b.energy, full)
     << "\n";
  os << "frobenius_distance " << format_energy(d.frobenius, full) << "\n";
  os << "occupation_distance " << format_energy(d.occupation_distance, full)
     << "\n";
  return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Entropic density-matrix functional calculations for "
               "two-electron diatomics"};
  app.set_version_flag("--version", version_string);

  std::string method_pos;
  std::vector<std::string> file_pos;
  std::string config_path;
  std::string r_text;
  RunConfig flags;

  app.add_option("method", method_pos,
                 "hf | fci | idmft | idmft-ex | scan | fit | compare");
  app.add_option("files", file_pos, "dump files for 'compare'")->expected(0, 2);
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--geometry", flags.geometry_file,
                 "geometry file (angstrom + charge line)");
  app.add_option("--mol", flags.elements,
                 "inline diatomic, two element symbols, e.g. \"He H\"");
  app.add_option("--charge", flags.charge, "net charge");
  app.add_option("--R", r_text, "separation(s) in angstrom, comma separated");
  app.add_option("--kappa", flags.kappa, "entropy weight (idmft)");
  app.add_option("--a", flags.a, "exchange weight (idmft-ex)");
  app.add_option("--b", flags.b, "constant energy shift");
  app.add_option("--basis", flags.basis, "basis set name or file");
  app.add_option("--output,-o", flags.output, "output file ('-' = stdout)");
  app.add_option("--dump", flags.dump_file, "write a calculation dump");
  app.add_option("--dump-integrals", flags.integrals_file,
                 "write the integral tables");
  app.add_option("--methods", flags.methods,
                 "scan columns, e.g. hf,fci,idmft");
  app.add_flag("--full-precision", flags.full_precision,
               "17 significant digits in outputs");
  app.add_flag("--verbose,-v", flags.verbose, "iteration logging to stderr");
  app.add_option("--max-iter", flags.max_iter, "SCF iteration cap");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << version_string << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage_error;
  }

  try {
    RunConfig cfg;
    std::map<std::string, std::string> file_kv;
    if (!config_path.empty()) {
      file_kv = parse_config_file(config_path);
      apply_config(cfg, file_kv);
    }

    // command line wins over the config file; remember what it overrode
    std::vector<std::string> overridden;
    auto overlay = [&](const char* name, const char* key, auto member) {
      if (app.count(name) == 0) return;
      cfg.*member = flags.*member;
      if (file_kv.count(key)) overridden.push_back(key);
    };
    overlay("--geometry", "geometry", &RunConfig::geometry_file);
    overlay("--mol", "mol", &RunConfig::elements);
    overlay("--charge", "charge", &RunConfig::charge);
    overlay("--kappa", "kappa", &RunConfig::kappa);
    overlay("--a", "a", &RunConfig::a);
    overlay("--b", "b", &RunConfig::b);
    overlay("--basis", "basis", &RunConfig::basis);
    overlay("--output", "output", &RunConfig::output);
    overlay("--dump", "dump", &RunConfig::dump_file);
    overlay("--dump-integrals", "dump-integrals", &RunConfig::integrals_file);
    overlay("--methods", "methods", &RunConfig::methods);
    overlay("--full-precision", "full-precision", &RunConfig::full_precision);
    overlay("--verbose", "verbose", &RunConfig::verbose);
    overlay("--max-iter", "max-iter", &RunConfig::max_iter);
    if (app.count("--R") > 0) {
      cfg.r_angstrom = parse_r_list(r_text);
      if (file_kv.count("R")) overridden.push_back("R");
    }
    if (!method_pos.empty()) {
      if (file_kv.count("method") && file_kv.at("method") != method_pos)
        overridden.push_back("method");
      cfg.method = method_pos;
    }
    cfg.compare_files = file_pos;

    static const std::set<std::string> methods = {
        "hf", "fci", "idmft", "idmft-ex", "scan", "fit", "compare"};
    if (cfg.method.empty())
      throw UsageError("no method given; expected one of hf, fci, idmft, "
                       "idmft-ex, scan, fit, compare");
    if (!methods.count(cfg.method))
      throw UsageError("unknown method '" + cfg.method + "'");
    if (cfg.method == "compare") {
      if (cfg.compare_files.size() != 2)
        throw UsageError("compare needs exactly two dump files");
    } else {
      if (!cfg.compare_files.empty())
        throw UsageError("positional files are only valid with 'compare'");
      if (cfg.geometry_file.empty() && cfg.elements.empty())
        throw UsageError("provide --geometry or --mol");
      if (!cfg.geometry_file.empty() && !cfg.elements.empty())
        throw UsageError("--geometry and --mol are mutually exclusive");
    }
    if (cfg.max_iter <= 0) throw UsageError("--max-iter must be positive");

    std::ofstream file_out;
    std::ostream* os = &out;
    if (!cfg.output.empty() && cfg.output != "-") {
      file_out.open(cfg.output);
      if (!file_out)
        throw UsageError("cannot open output file '" + cfg.output + "'");
      os = &file_out;
    }

    if (cfg.method == "compare") {
      // header without geometry context
      *os << "# " << version_string << "\n# method: compare\n";
      return run_compare(cfg, *os);
    }

    ResolvedBasis basis = resolve_basis(cfg.basis);
    Molecule header_mol = make_molecule(
        cfg, cfg.r_angstrom.empty() ? 1.0 : cfg.r_angstrom.front());
    print_header(*os, cfg, header_mol, basis, config_path, overridden);

    if (cfg.method == "scan") return run_scan(cfg, basis, *os);
    if (cfg.method == "fit") return run_fit(cfg, basis, *os);
    return run_single(cfg, basis, *os);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage_error;
  } catch (const BasisParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_compute_error;
  }
}

} // namespace idmft::cli
