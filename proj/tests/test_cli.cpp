#include <doctest.h>

#include "cli.hpp"

#include <idmft/analysis.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = idmft::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// scratch directory shared by the suite, removed by the last fixture
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("idmft_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name) const {
    return (dir / name).string();
  }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream f(file(name));
    f << text;
  }
  std::string read(const std::string& name) const {
    std::ifstream f(file(name));
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("version and help") {
  CliRun v = run_cli({"--version"});
  CHECK(v.code == idmft::cli::exit_ok);
  CHECK(v.out == "idmft 0.1.0\n");

  CliRun h = run_cli({"--help"});
  CHECK(h.code == idmft::cli::exit_ok);
  CHECK(h.out.find("--kappa") != std::string::npos);
  CHECK(h.out.find("compare") != std::string::npos);
}

TEST_CASE("single point energies") {
  CliRun r = run_cli({"hf", "--mol", "He H", "--charge", "1", "--R", "0.80"});
  REQUIRE(r.code == idmft::cli::exit_ok);
  CHECK(r.err.empty());
  CHECK(r.out.find("energy -2.923531927667\n") != std::string::npos);
  CHECK(r.out.find("# method: hf") != std::string::npos);
  CHECK(r.out.find("# molecule: He H  charge=1") != std::string::npos);

  CliRun full = run_cli({"hf", "--mol", "He H", "--charge", "1", "--R", "0.80",
                         "--full-precision"});
  CHECK(full.out.find("energy -2.9235319276672") != std::string::npos);

  CliRun fci = run_cli({"fci", "--mol", "He H", "--charge", "1", "--R", "0.80"});
  REQUIRE(fci.code == idmft::cli::exit_ok);
  CHECK(fci.out.find("energy -2.960888230") != std::string::npos);
  CHECK(fci.out.find("entropy 0.246079") != std::string::npos);
  CHECK(fci.out.find("e_cum -0.084943") != std::string::npos);
  CHECK(fci.out.find("natural_occupations 1.9") != std::string::npos);

  CliRun dmft = run_cli({"idmft", "--mol", "He H", "--charge", "1", "--R",
                         "0.80", "--kappa", "0.015", "--b", "0.03244"});
  REQUIRE(dmft.code == idmft::cli::exit_ok);
  CHECK(dmft.out.find("energy -2.955971") != std::string::npos);
  CHECK(dmft.out.find("# params: kappa=0.015 b=0.03244") != std::string::npos);
  CHECK(dmft.out.find("breakdown one_electron") != std::string::npos);

  CliRun ex = run_cli({"idmft-ex", "--mol", "H H", "--R", "5.2918", "--a",
                       "0.360674"});
  REQUIRE(ex.code == idmft::cli::exit_ok);
  CHECK(ex.out.find("exchange -0.") != std::string::npos);
}

TEST_CASE("reruns are byte identical") {
  std::vector<std::string> args = {"fci", "--mol", "He H", "--charge", "1",
                                   "--R", "0.80", "--full-precision"};
  CliRun a = run_cli(args);
  CliRun b = run_cli(args);
  CHECK(a.code == idmft::cli::exit_ok);
  CHECK(a.out == b.out);
}

TEST_CASE("usage errors exit with 2") {
  auto usage = [](const std::vector<std::string>& args) {
    CliRun r = run_cli(args);
    INFO("argv:", [&] {
      std::string s;
      for (const auto& a : args) s += " " + a;
      return s;
    }());
    INFO("stderr: ", r.err);
    CHECK(r.code == idmft::cli::exit_usage_error);
    CHECK(r.err.find("error:") != std::string::npos);
  };

  usage({});                                          // no method
  usage({"hartree"});                                 // unknown method
  usage({"hf", "--mol", "He H"});                     // no separation
  usage({"hf", "--R", "0.8"});                        // no molecule
  usage({"hf", "--mol", "He H", "--R", "0.8,0.9"});   // list for single point
  usage({"hf", "--mol", "He H", "--R", "abc"});       // malformed R
  usage({"hf", "--mol", "He H", "--R", "-0.8"});      // negative R
  usage({"hf", "--mol", "HeH", "--R", "0.8"});        // one token molecule
  usage({"hf", "--mol", "He H", "--R", "0.8", "--max-iter", "0"});
  usage({"hf", "--mol", "He H", "--R", "0.8", "--geometry", "geom.xyz"});
  usage({"hf", "--mol", "He H", "--R", "0.8", "--bogus-flag"});
  usage({"idmft", "--mol", "He H", "--R", "0.8"});    // kappa missing
  usage({"idmft-ex", "--mol", "He H", "--R", "0.8"}); // a missing
  usage({"scan", "--mol", "He H", "--R", "0.8", "--methods", "hf,dft"});
  usage({"scan", "--mol", "He H", "--R", "0.8", "--methods",
         "idmft,idmft-ex", "--kappa", "0.015"});
  usage({"compare", "only_one.dump"});
  usage({"hf", "--mol", "He H", "--R", "0.8", "stray.dump"});
  usage({"hf", "--mol", "He H", "--R", "0.8", "--basis", "no-such-basis"});
  usage({"hf", "--mol", "Li H", "--R", "1.6"});       // unsupported element
}

TEST_CASE("failed computations exit with 1") {
  CliRun r = run_cli({"idmft", "--mol", "H H", "--R", "2.8", "--kappa",
                      "0.05", "--max-iter", "4"});
  CHECK(r.code == idmft::cli::exit_compute_error);
  CHECK(r.err.find("error:") != std::string::npos);

  Scratch tmp;
  tmp.write("degenerate.xyz", "H 0 0 0\nH 0 0 0\n");
  CliRun d = run_cli({"hf", "--geometry", tmp.file("degenerate.xyz")});
  CHECK(d.code == idmft::cli::exit_compute_error);
}

TEST_CASE("output redirection") {
  Scratch tmp;
  std::vector<std::string> direct = {"hf", "--mol", "He H", "--charge", "1",
                                     "--R", "0.80"};
  CliRun stream = run_cli(direct);

  std::vector<std::string> to_file = direct;
  to_file.insert(to_file.end(), {"-o", tmp.file("run.out")});
  CliRun filed = run_cli(to_file);
  CHECK(filed.code == idmft::cli::exit_ok);
  CHECK(filed.out.empty());
  CHECK(tmp.read("run.out") == stream.out);

  std::vector<std::string> dashed = direct;
  dashed.insert(dashed.end(), {"--output", "-"});
  CHECK(run_cli(dashed).out == stream.out);

  CliRun bad = run_cli({"hf", "--mol", "He H", "--charge", "1", "--R", "0.80",
                        "-o", (tmp.dir / "missing" / "x.out").string()});
  CHECK(bad.code == idmft::cli::exit_usage_error);
}

TEST_CASE("geometry file equals the inline molecule") {
  Scratch tmp;
  tmp.write("heh.xyz", "He 0 0 0\nH 0 0 0.80\ncharge=1\n");

  CliRun from_file = run_cli({"hf", "--geometry", tmp.file("heh.xyz"),
                              "--full-precision"});
  CliRun inline_mol = run_cli({"hf", "--mol", "He H", "--charge", "1", "--R",
                               "0.80", "--full-precision"});
  REQUIRE(from_file.code == idmft::cli::exit_ok);

  auto energy_line = [](const std::string& s) {
    auto b = s.find("\nenergy ");
    auto e = s.find('\n', b + 1);
    return s.substr(b, e - b);
  };
  CHECK(energy_line(from_file.out) == energy_line(inline_mol.out));

  tmp.write("broken.xyz", "He 0 0\n");
  CliRun broken = run_cli({"hf", "--geometry", tmp.file("broken.xyz")});
  CHECK(broken.code == idmft::cli::exit_usage_error);
  CHECK(broken.err.find("line 1") != std::string::npos);
}

TEST_CASE("config files with command line overrides") {
  Scratch tmp;
  tmp.write("run.cfg",
            "# sample configuration\n"
            "method = idmft\n"
            "mol = He H\n"
            "charge = 1\n"
            "R = 0.80\n"
            "kappa = 0.5\n"
            "b = 0.03244\n");

  CliRun base = run_cli({"--config", tmp.file("run.cfg")});
  REQUIRE(base.code == idmft::cli::exit_ok);
  CHECK(base.out.find("# params: kappa=0.5") != std::string::npos);

  CliRun over = run_cli({"--config", tmp.file("run.cfg"), "--kappa", "0.015"});
  REQUIRE(over.code == idmft::cli::exit_ok);
  CHECK(over.out.find("# params: kappa=0.015") != std::string::npos);
  CHECK(over.out.find("(command line overrides: kappa)") != std::string::npos);
  CHECK(over.out.find("energy -2.955971") != std::string::npos);

  tmp.write("bad.cfg", "method idmft\n");
  CHECK(run_cli({"--config", tmp.file("bad.cfg")}).code ==
        idmft::cli::exit_usage_error);

  tmp.write("dup.cfg", "kappa = 1\nkappa = 2\n");
  CliRun dup = run_cli({"--config", tmp.file("dup.cfg")});
  CHECK(dup.code == idmft::cli::exit_usage_error);
  CHECK(dup.err.find("duplicate") != std::string::npos);

  CHECK(run_cli({"--config", tmp.file("nope.cfg")}).code ==
        idmft::cli::exit_usage_error);
}

TEST_CASE("basis resolution through files and the search path") {
  Scratch tmp;
  tmp.write("mine.gbs", idmft::builtin_ccpvdz());

  // direct path
  CliRun direct = run_cli({"hf", "--mol", "He H", "--charge", "1", "--R",
                           "0.80", "--basis", tmp.file("mine.gbs")});
  REQUIRE(direct.code == idmft::cli::exit_ok);
  CHECK(direct.out.find("energy -2.923531927667\n") != std::string::npos);
  CHECK(direct.out.find("# basis: " + tmp.file("mine.gbs")) !=
        std::string::npos);

  // search directory with implicit extension
  ::setenv("IDMFT_BASIS_DIR", tmp.dir.c_str(), 1);
  CliRun searched = run_cli({"hf", "--mol", "He H", "--charge", "1", "--R",
                             "0.80", "--basis", "mine"});
  ::unsetenv("IDMFT_BASIS_DIR");
  REQUIRE(searched.code == idmft::cli::exit_ok);
  CHECK(searched.out.find("energy -2.923531927667\n") != std::string::npos);
  CHECK(searched.out.find("# basis: mine (") != std::string::npos);

  // unparseable basis file is a usage error
  tmp.write("bad.gbs", "H 0\nD 1 1.0\n 1.0 1.0\n****\n");
  CliRun bad = run_cli({"hf", "--mol", "He H", "--charge", "1", "--R", "0.80",
                        "--basis", tmp.file("bad.gbs")});
  CHECK(bad.code == idmft::cli::exit_usage_error);
}

TEST_CASE("integral dumps") {
  Scratch tmp;
  CliRun r = run_cli({"hf", "--mol", "He H", "--charge", "1", "--R", "0.80",
                      "--dump-integrals", tmp.file("ints.txt")});
  REQUIRE(r.code == idmft::cli::exit_ok);
  std::string text = tmp.read("ints.txt");
  CHECK(text.rfind("integrals 10\n", 0) == 0);
  CHECK(text.find("\nERI 9 9 9 9 ") != std::string::npos);
}

TEST_CASE("calculation dumps and compare") {
  Scratch tmp;
  std::vector<std::string> common = {"--mol", "H H", "--R", "5.2918"};

  std::vector<std::string> fci_args = {"fci"};
  fci_args.insert(fci_args.end(), common.begin(), common.end());
  fci_args.insert(fci_args.end(), {"--dump", tmp.file("ci.dump")});
  REQUIRE(run_cli(fci_args).code == idmft::cli::exit_ok);

  std::vector<std::string> dmft_args = {"idmft-ex"};
  dmft_args.insert(dmft_args.end(), common.begin(), common.end());
  dmft_args.insert(dmft_args.end(),
                   {"--a", "0.36067376022224085", "--dump", tmp.file("ex.dump")});
  REQUIRE(run_cli(dmft_args).code == idmft::cli::exit_ok);

  CliRun cmp = run_cli({"compare", tmp.file("ci.dump"), tmp.file("ex.dump")});
  REQUIRE(cmp.code == idmft::cli::exit_ok);
  CHECK(cmp.out.find("method_a fci") != std::string::npos);
  CHECK(cmp.out.find("method_b idmft-ex") != std::string::npos);
  CHECK(cmp.out.find("frobenius_distance") != std::string::npos);
  CHECK(cmp.out.find("occupation_distance") != std::string::npos);

  CliRun self = run_cli({"compare", tmp.file("ci.dump"), tmp.file("ci.dump"),
                         "--full-precision"});
  REQUIRE(self.code == idmft::cli::exit_ok);
  CHECK(self.out.find("energy_difference 0\n") != std::string::npos);

  // a dump from a different geometry must be rejected
  std::vector<std::string> other = {"fci", "--mol", "H H", "--R", "1.0",
                                    "--dump", tmp.file("near.dump")};
  REQUIRE(run_cli(other).code == idmft::cli::exit_ok);
  CliRun mismatch =
      run_cli({"compare", tmp.file("ci.dump"), tmp.file("near.dump")});
  CHECK(mismatch.code == idmft::cli::exit_compute_error);
  CHECK(mismatch.err.find("different systems") != std::string::npos);

  CliRun missing = run_cli({"compare", tmp.file("ci.dump"), tmp.file("no.dump")});
  CHECK(missing.code == idmft::cli::exit_compute_error);
}

TEST_CASE("scan output round trips") {
  Scratch tmp;
  CliRun r = run_cli({"scan", "--mol", "He H", "--charge", "1", "--R",
                      "0.80,4.00", "--methods", "hf,fci,idmft", "--kappa",
                      "0.015", "--b", "0.03244", "-o", tmp.file("scan.csv")});
  REQUIRE(r.code == idmft::cli::exit_ok);

  std::ifstream f(tmp.file("scan.csv"));
  auto pts = idmft::parse_scan_csv(f);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].r_angstrom == 0.80);
  CHECK(pts[1].r_angstrom == 4.00);
  for (const auto& p : pts) {
    CHECK(p.error.empty());
    REQUIRE(p.e_hf.has_value());
    REQUIRE(p.e_ci.has_value());
    REQUIRE(p.e_idmft.has_value());
  }
  CHECK(*pts[0].e_hf == doctest::Approx(-2.923532).epsilon(1e-6));
  CHECK(*pts[0].e_idmft == doctest::Approx(-2.955972).epsilon(1e-6));
  CHECK(*pts[1].e_ci == doctest::Approx(-2.887648).epsilon(1e-6));

  // every row failing is reported through the exit code
  CliRun fail = run_cli({"scan", "--mol", "He H", "--charge", "1", "--R",
                         "0.80", "--methods", "hf", "--max-iter", "2"});
  CHECK(fail.code == idmft::cli::exit_compute_error);
  CHECK(fail.out.find("R,S,E_cum,E_HF,E_CI,E_iDMFT,error") != std::string::npos);
}

TEST_CASE("fit reports the fitted parameters") {
  CliRun r = run_cli({"fit", "--mol", "He H", "--charge", "1", "--R",
                      "0.70,0.90"});
  REQUIRE(r.code == idmft::cli::exit_ok);
  CHECK(r.out.find("kappa 0.") != std::string::npos);
  CHECK(r.out.find("\nb ") != std::string::npos);
  CHECK(r.out.find("points 2") != std::string::npos);

  CliRun single = run_cli({"fit", "--mol", "He H", "--charge", "1", "--R",
                           "0.80"});
  CHECK(single.code == idmft::cli::exit_usage_error);
}

} // TEST_SUITE
