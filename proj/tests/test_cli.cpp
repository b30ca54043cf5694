/**
 * Black-box checks of the psl2z_spectrum binary: exit codes, output
 * formats, file side effects and the flag/environment precedence rules.
 * argv[1] is the path to the binary; the process exits with the number
 * of failed checks.
 */

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run(std::string const& cmd) {
  CliResult result;
  std::string full = cmd + " 2>/dev/null";
  FILE* pipe = popen(full.c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
  int rc = pclose(pipe);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

std::string read_file(fs::path const& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

void write_file(fs::path const& path, std::string const& content) {
  std::ofstream os(path, std::ios::binary);
  os << content;
}

bool contains(std::string const& haystack, std::string const& needle) {
  return haystack.find(needle) != std::string::npos;
}

bool starts_with(std::string const& s, std::string const& prefix) {
  return s.rfind(prefix, 0) == 0;
}

int g_failures = 0;

void check(bool ok, std::string const& name) {
  std::printf("%s: %s\n", ok ? "ok" : "FAIL", name.c_str());
  if (!ok) ++g_failures;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_checks <path-to-psl2z_spectrum>\n");
    return 64;
  }
  std::string cli = argv[1];
  fs::path tmp = fs::current_path() / "cli_checks_tmp";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  // --- argument handling ---
  {
    auto r = run(cli + " --help");
    check(r.status == 0 && contains(r.out, "ball") && contains(r.out, "bound"),
          "--help exits 0 and lists the subcommands");
    check(run(cli).status == 1, "no subcommand exits 1");
    check(run(cli + " frobnicate").status == 1, "unknown subcommand exits 1");
    check(run(cli + " ball --radius 2 --format yaml").status == 1,
          "unknown format exits 1");
  }

  // --- ball ---
  {
    check(run(cli + " ball --radius -1").status == 1,
          "ball rejects a negative radius with exit 1");

    auto csv = run(cli + " ball --radius 2 --format csv");
    check(csv.status == 0 && csv.out == "n,count\n0,1\n1,3\n2,6\n",
          "ball csv output is the golden sphere table");

    fs::path out1 = tmp / "out1";
    auto r = run(cli + " ball --radius 2 --output " + out1.string());
    check(r.status == 0 && contains(r.out, "radius 2\n") &&
              contains(r.out, "nodes 10\n") &&
              contains(r.out, "spheres [1, 3, 6]\n"),
          "ball text output reports radius, nodes and spheres");
    check(fs::exists(out1 / "ball_r2.txt") &&
              fs::exists(out1 / "spheres_r2.csv"),
          "ball writes the record and csv files into --output");
    check(starts_with(read_file(out1 / "ball_r2.txt"),
                      "matrix(1,0,0,1) 0 - ruU\n"),
          "ball record file starts with the identity row");

    fs::path out2 = tmp / "out2";
    auto dot = run(cli + " ball --radius 3 --dot --output " + out2.string());
    check(dot.status == 0 && fs::exists(out2 / "ball_r3.dot") &&
              starts_with(read_file(out2 / "ball_r3.dot"), "graph"),
          "ball --dot writes a DOT file at small radius");
    check(run(cli + " ball --radius 7 --dot").status == 1,
          "ball --dot refuses radius > 6 with exit 1");

    auto js = run(cli + " ball --radius 2 --format json");
    check(js.status == 0 && starts_with(js.out, "{") &&
              contains(js.out, "\"sphere_sizes\": [1, 3, 6]"),
          "ball json output carries the sphere sizes");
  }

  // --- output directory environment variable ---
  {
    fs::path env_dir = tmp / "envdir";
    auto r = run("PSL2Z_SPECTRUM_OUTPUT_DIR=" + env_dir.string() + " " + cli +
                 " ball --radius 1");
    check(r.status == 0 && fs::exists(env_dir / "ball_r1.txt"),
          "PSL2Z_SPECTRUM_OUTPUT_DIR selects the output directory");

    fs::path env_lose = tmp / "envlose";
    fs::path flag_win = tmp / "flagwin";
    run("PSL2Z_SPECTRUM_OUTPUT_DIR=" + env_lose.string() + " " + cli +
        " ball --radius 1 --output " + flag_win.string());
    check(fs::exists(flag_win / "ball_r1.txt") &&
              !fs::exists(env_lose / "ball_r1.txt"),
          "--output takes precedence over the environment variable");
  }

  // --- verify ---
  {
    check(run(cli + " verify --radius 3").status == 1,
          "verify rejects radius < 4 with exit 1");

    auto r = run(cli + " verify --radius 5");
    bool ordered = true;
    std::size_t pos = 0;
    for (std::string name :
         {"compatibility pass", "forbidden-suffixes pass",
          "transition-table pass", "growth pass", "edge-sums-trivial pass",
          "edge-sums-optimized pass", "verify pass"}) {
      std::size_t at = r.out.find(name, pos);
      ordered = ordered && at != std::string::npos;
      if (at != std::string::npos) pos = at;
    }
    check(r.status == 0 && ordered,
          "verify passes all six suites in documented order");

    auto js = run(cli + " verify --radius 5 --format json");
    check(js.status == 0 && starts_with(js.out, "{") &&
              contains(js.out, "\"pass\": true"),
          "verify json report marks the run as passing");

    auto st = run(cli + " verify --radius 5 --self-test");
    check(st.status == 3 && contains(st.out, "compatibility fail") &&
              contains(st.out, "counterexample") &&
              contains(st.out, "verify fail"),
          "verify --self-test fails with exit 3 and a counterexample");

    fs::path report = tmp / "report.txt";
    auto wr = run(cli + " verify --radius 5 --output " + report.string());
    check(wr.status == 0 && read_file(report) == wr.out,
          "verify --output mirrors stdout into the file");

    auto threaded = run(cli + " verify --radius 5 --threads 4");
    check(threaded.status == 0 && threaded.out == r.out,
          "verify output is identical for 1 and 4 threads");
  }

  // --- bound ---
  {
    auto r = run(cli + " bound");
    check(r.status == 0 && contains(r.out, "lower_bound 0.07") &&
              contains(r.out, "max_f 2.9") &&
              contains(r.out, "tree_upper_bound_3 0.1715728753"),
          "bound reports the certified bound and the tree comparison");

    auto js = run(cli + " bound --format json");
    check(js.status == 0 && starts_with(js.out, "{") &&
              contains(js.out, "\"certificate\"") &&
              contains(js.out, "\"tree_upper_bound_3\""),
          "bound json output wraps the certificate");

    auto up = run(cli + " bound --upper --radius 4");
    check(up.status == 0 &&
              contains(up.out, "dirichlet_upper_bound radius 4 value "),
          "bound --upper appends the ball Dirichlet value");

    check(run(cli + " bound --tolerance 0").status == 1,
          "bound rejects a non-positive tolerance with exit 1");

    fs::path cert = tmp / "cert.json";
    auto wr = run(cli + " bound --output " + cert.string());
    check(wr.status == 0 && fs::exists(cert) &&
              starts_with(read_file(cert), "{"),
          "bound --output stores the certificate JSON");

    auto ok = run(cli + " bound --check " + cert.string());
    check(ok.status == 0 && starts_with(ok.out, "certificate ok lower_bound "),
          "bound --check accepts its own certificate with exit 0");

    check(run(cli + " bound --check " + (tmp / "missing.json").string())
                  .status == 1,
          "bound --check exits 1 when the file cannot be read");

    fs::path bad = tmp / "bad.json";
    write_file(bad, "not json at all");
    check(run(cli + " bound --check " + bad.string()).status == 1,
          "bound --check exits 1 on malformed JSON");

    // internally consistent but certifies nothing: the trivial valuation
    fs::path weak = tmp / "weak.json";
    write_file(weak,
               "{\n  \"c\": [1, 1, 1, 1, 1],\n  \"f\": [3, 3, 3, 3, 3, 3],\n"
               "  \"max_f\": 3,\n  \"lower_bound\": 0,\n  \"seed\": 0,\n"
               "  \"tolerance\": 1e-08\n}\n");
    auto rejected = run(cli + " bound --check " + weak.string());
    check(rejected.status == 4 &&
              starts_with(rejected.out, "certificate rejected"),
          "bound --check rejects a below-threshold certificate with exit 4");

    // stored fields that disagree with their own valuation
    fs::path tampered = tmp / "tampered.json";
    std::string text = read_file(cert);
    auto at = text.find("\"lower_bound\": ");
    std::string doctored = text.substr(0, at) + "\"lower_bound\": 0.5,\n  " +
                           text.substr(text.find("\"seed\""));
    write_file(tampered, doctored);
    auto inconsistent = run(cli + " bound --check " + tampered.string());
    check(inconsistent.status == 4 &&
              starts_with(inconsistent.out, "certificate rejected"),
          "bound --check rejects a tampered certificate with exit 4");
  }

  fs::remove_all(tmp);
  std::printf("cli checks: %d failure(s)\n", g_failures);
  return g_failures;
}
