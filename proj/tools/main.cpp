/**
 * psl2z_spectrum: build Cayley balls for PSL(2,Z) over {r, u}, verify the
 * suffix-type machinery on them, and compute two-sided estimates for the
 * bottom of the Laplacian spectrum.
 *
 * Exit codes: 0 success, 1 usage error, 2 resource limit, 3 verification
 * counterexample, 4 bound regression.
 */

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psl2z/ball.hpp"
#include "psl2z/bounds.hpp"
#include "psl2z/certificate_io.hpp"
#include "psl2z/format.hpp"
#include "psl2z/typing.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_resources = 2;
constexpr int exit_counterexample = 3;
constexpr int exit_bound_regression = 4;

template <class Range>
std::string int_array(Range const& values) {
  std::string out = "[";
  bool first = true;
  for (auto v : values) {
    if (!first) out += ", ";
    first = false;
    out += std::to_string(v);
  }
  return out + "]";
}

std::string json_bool(bool b) { return b ? "true" : "false"; }

void write_text_file(std::filesystem::path const& path,
                     std::string const& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << content;
}

// --- ball ------------------------------------------------------------------------

struct BallConfig {
  int radius = 0;
  std::string format = "text";
  std::string output_dir;
  bool dot = false;
};

int run_ball(BallConfig const& cfg) {
  if (cfg.radius < 0) {
    std::cerr << "ball: --radius must be >= 0\n";
    return exit_usage;
  }
  if (cfg.dot && cfg.radius > 6) {
    std::cerr << "ball: --dot is limited to radius <= 6\n";
    return exit_usage;
  }

  psl2z::Ball ball(cfg.radius);
  std::filesystem::path dir =
      cfg.output_dir.empty() ? std::filesystem::path(".")
                             : std::filesystem::path(cfg.output_dir);
  std::filesystem::create_directories(dir);

  auto records_path =
      dir / ("ball_r" + std::to_string(cfg.radius) + ".txt");
  auto csv_path = dir / ("spheres_r" + std::to_string(cfg.radius) + ".csv");
  {
    std::ofstream os(records_path, std::ios::binary);
    psl2z::write_ball_records(os, ball);
  }
  std::ostringstream csv;
  psl2z::write_sphere_csv(csv, ball);
  write_text_file(csv_path, csv.str());

  std::vector<std::string> files{records_path.string(), csv_path.string()};
  if (cfg.dot) {
    auto dot_path = dir / ("ball_r" + std::to_string(cfg.radius) + ".dot");
    std::ostringstream dot;
    psl2z::write_dot(dot, ball);
    write_text_file(dot_path, dot.str());
    files.push_back(dot_path.string());
  }

  if (cfg.format == "csv") {
    std::cout << csv.str();
    return exit_ok;
  }
  if (cfg.format == "json") {
    std::cout << "{\n"
              << "  \"radius\": " << cfg.radius << ",\n"
              << "  \"nodes\": " << ball.size() << ",\n"
              << "  \"sphere_sizes\": " << int_array(ball.sphere_sizes())
              << ",\n"
              << "  \"files\": [";
    for (std::size_t i = 0; i < files.size(); ++i)
      std::cout << (i ? ", " : "") << '"' << files[i] << '"';
    std::cout << "]\n}\n";
    return exit_ok;
  }
  std::cout << "radius " << cfg.radius << "\n"
            << "nodes " << ball.size() << "\n"
            << "spheres " << int_array(ball.sphere_sizes()) << "\n";
  for (auto const& f : files) std::cout << "wrote " << f << "\n";
  return exit_ok;
}

// --- verify ----------------------------------------------------------------------

struct VerifyConfig {
  int radius = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  std::string format = "text";
  std::string output_file;
  int threads = 1;
  bool self_test = false;
};

struct SuiteLine {
  std::string name;
  bool pass = false;
  std::string text_extra;   // appended to the text line
  std::string json_extra;   // appended inside the json object
  std::vector<psl2z::Counterexample> counterexamples;
};

std::string render_report(std::vector<SuiteLine> const& suites,
                          VerifyConfig const& cfg, bool all_pass,
                          bool json) {
  std::ostringstream os;
  if (json) {
    os << "{\n"
       << "  \"radius\": " << cfg.radius << ",\n"
       << "  \"seed\": " << cfg.seed << ",\n";
    for (auto const& s : suites) {
      os << "  \"" << s.name << "\": {\"pass\": " << json_bool(s.pass);
      if (!s.json_extra.empty()) os << ", " << s.json_extra;
      if (!s.counterexamples.empty()) {
        os << ", \"counterexamples\": [";
        for (std::size_t i = 0; i < s.counterexamples.size(); ++i) {
          if (i) os << ", ";
          os << "{\"element\": \"" << psl2z::to_string(s.counterexamples[i].element)
             << "\", \"detail\": \"" << s.counterexamples[i].detail << "\"}";
        }
        os << "]";
      }
      os << "},\n";
    }
    os << "  \"pass\": " << json_bool(all_pass) << "\n}\n";
  } else {
    os << "radius " << cfg.radius << "\n"
       << "seed " << cfg.seed << "\n";
    for (auto const& s : suites) {
      os << s.name << " " << (s.pass ? "pass" : "fail");
      if (!s.text_extra.empty()) os << " " << s.text_extra;
      os << "\n";
      for (auto const& ce : s.counterexamples)
        os << "  counterexample " << psl2z::to_string(ce.element) << " "
           << ce.detail << "\n";
    }
    os << "verify " << (all_pass ? "pass" : "fail") << "\n";
  }
  return os.str();
}

int run_verify(VerifyConfig const& cfg) {
  if (cfg.radius < 4) {
    std::cerr << "verify: --radius must be >= 4 (all six types need margin)\n";
    return exit_usage;
  }
  if (cfg.threads < 1) {
    std::cerr << "verify: --threads must be >= 1\n";
    return exit_usage;
  }
  if (!(cfg.tolerance > 0)) {
    std::cerr << "verify: --tolerance must be positive\n";
    return exit_usage;
  }

  psl2z::Ball ball(cfg.radius);
  auto expected = psl2z::expected_transition_table();
  if (cfg.self_test) expected.rows[5] = {3};  // deliberate corruption

  std::vector<SuiteLine> suites;

  {
    auto r = psl2z::verify_compatibility(ball, expected, 2, cfg.threads);
    SuiteLine s{"compatibility", r.pass, "", "", r.counterexamples};
    s.text_extra = "nodes " + std::to_string(r.nodes_checked) +
                   " type-counts " + int_array(r.type_counts);
    s.json_extra = "\"nodes\": " + std::to_string(r.nodes_checked) +
                   ", \"type_counts\": " + int_array(r.type_counts);
    suites.push_back(std::move(s));
  }
  {
    auto r = psl2z::verify_forbidden_suffixes(ball, cfg.threads);
    SuiteLine s{"forbidden-suffixes", r.pass, "", "", r.counterexamples};
    s.text_extra = "nodes " + std::to_string(r.nodes_checked);
    s.json_extra = "\"nodes\": " + std::to_string(r.nodes_checked);
    suites.push_back(std::move(s));
  }
  {
    SuiteLine s{"transition-table", true, "", "", {}};
    auto observed = psl2z::extract_transition_table(ball);
    s.pass = observed.rows == psl2z::expected_transition_table().rows;
    suites.push_back(std::move(s));
  }
  {
    // two independent counts of the same growth series
    SuiteLine s{"growth", true, "", "", {}};
    auto table = psl2z::expected_transition_table();
    auto elements = psl2z::automaton_sphere_counts(table, cfg.radius);
    auto paths = psl2z::automaton_path_counts(table, cfg.radius);
    std::vector<std::uint64_t> bfs(ball.sphere_sizes().begin(),
                                   ball.sphere_sizes().end());
    s.pass = bfs == elements && psl2z::geodesic_word_counts(ball) == paths;
    s.text_extra = "spheres " + int_array(bfs);
    s.json_extra = "\"sphere_sizes\": " + int_array(bfs);
    suites.push_back(std::move(s));
  }

  auto edge_suite = [&](std::string name, psl2z::Valuation const& c) {
    auto r = psl2z::verify_edge_valuation(ball, c, 3, 1e-12, cfg.threads);
    SuiteLine s{std::move(name), r.pass, "", "", r.counterexamples};
    s.text_extra =
        "nodes " + std::to_string(r.nodes_checked) + " max-reciprocity-error " +
        psl2z::format_number(r.max_reciprocity_error) + " max-sum-error " +
        psl2z::format_number(r.max_sum_error);
    s.json_extra = "\"nodes\": " + std::to_string(r.nodes_checked) +
                   ", \"max_reciprocity_error\": " +
                   psl2z::format_number(r.max_reciprocity_error) +
                   ", \"max_sum_error\": " +
                   psl2z::format_number(r.max_sum_error);
    suites.push_back(std::move(s));
  };
  edge_suite("edge-sums-trivial", psl2z::Valuation::ones());
  auto optimized = psl2z::optimize_valuation(cfg.tolerance, cfg.seed);
  edge_suite("edge-sums-optimized", optimized.certificate.c);

  bool all_pass = true;
  for (auto const& s : suites) all_pass = all_pass && s.pass;

  std::string report =
      render_report(suites, cfg, all_pass, cfg.format == "json");
  std::cout << report;
  if (!cfg.output_file.empty())
    write_text_file(cfg.output_file, report);
  return all_pass ? exit_ok : exit_counterexample;
}

// --- bound -----------------------------------------------------------------------

struct BoundConfig {
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
  bool upper = false;
  int radius = 8;
  std::string check_file;
  std::string format = "text";
  std::string output_file;
};

int run_bound(BoundConfig const& cfg) {
  if (!(cfg.tolerance > 0)) {
    std::cerr << "bound: --tolerance must be positive\n";
    return exit_usage;
  }

  if (!cfg.check_file.empty()) {
    std::ifstream is(cfg.check_file, std::ios::binary);
    if (!is) {
      std::cerr << "bound: cannot read " << cfg.check_file << "\n";
      return exit_usage;
    }
    std::stringstream buf;
    buf << is.rdbuf();
    psl2z::BoundCertificate cert;
    try {
      cert = psl2z::certificate_from_json(buf.str());
    } catch (std::invalid_argument const& e) {
      std::cerr << "bound: " << e.what() << "\n";
      return exit_usage;
    }
    auto check = psl2z::recheck_certificate(cert);
    if (check.consistent && check.meets_threshold) {
      std::cout << "certificate ok lower_bound "
                << psl2z::format_number(check.recomputed_lower_bound) << "\n";
      return exit_ok;
    }
    std::cout << "certificate rejected";
    if (!check.detail.empty()) std::cout << ": " << check.detail;
    if (check.consistent && !check.meets_threshold)
      std::cout << ": recomputed max_f "
                << psl2z::format_number(check.recomputed_max_f)
                << " misses the 2.93 threshold";
    std::cout << "\n";
    return exit_bound_regression;
  }

  if (cfg.upper && cfg.radius < 2) {
    std::cerr << "bound: --upper needs --radius >= 2\n";
    return exit_usage;
  }

  auto result = psl2z::optimize_valuation(cfg.tolerance, cfg.seed);
  auto const& cert = result.certificate;
  std::string cert_json = psl2z::certificate_to_json(cert);
  if (!cfg.output_file.empty()) write_text_file(cfg.output_file, cert_json);

  double tree = psl2z::tree_upper_bound(3);
  double dirichlet_value = 0;
  std::size_t dirichlet_iters = 0;
  if (cfg.upper) {
    psl2z::Ball ball(cfg.radius);
    auto d = psl2z::dirichlet_upper_bound(ball);
    dirichlet_value = d.value;
    dirichlet_iters = d.iterations;
  }

  if (cfg.format == "json") {
    std::ostringstream body;
    std::istringstream cert_lines(cert_json);
    std::string line;
    bool first = true;
    while (std::getline(cert_lines, line)) {
      body << (first ? "" : "\n  ") << line;
      first = false;
    }
    std::cout << "{\n  \"certificate\": " << body.str() << ",\n"
              << "  \"tree_upper_bound_3\": " << psl2z::format_number(tree);
    if (cfg.upper)
      std::cout << ",\n  \"dirichlet\": {\"radius\": " << cfg.radius
                << ", \"value\": " << psl2z::format_number(dirichlet_value)
                << ", \"iterations\": " << dirichlet_iters << "}";
    std::cout << "\n}\n";
  } else {
    std::cout << "lower_bound " << psl2z::format_number(cert.lower_bound)
              << "\n"
              << "max_f " << psl2z::format_number(cert.max_f) << "\n"
              << "c " << psl2z::format_number_array(cert.c.array()) << "\n"
              << "f " << psl2z::format_number_array(cert.f) << "\n"
              << "seed " << cert.seed << "\n"
              << "tolerance " << psl2z::format_number(cert.tolerance) << "\n"
              << "tree_upper_bound_3 " << psl2z::format_number(tree) << "\n";
    if (cfg.upper)
      std::cout << "dirichlet_upper_bound radius " << cfg.radius << " value "
                << psl2z::format_number(dirichlet_value) << " iterations "
                << dirichlet_iters << "\n";
  }

  if (cert.max_f > 2.93) {
    std::cerr << "bound: regression, max_f "
              << psl2z::format_number(cert.max_f) << " exceeds 2.93\n";
    return exit_bound_regression;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cayley-ball spectrum estimates for PSL(2,Z) over {r, u}"};
  app.require_subcommand(1);

  BallConfig ball_cfg;
  auto* ball = app.add_subcommand(
      "ball", "Build a Cayley ball and export its records");
  ball->add_option("--radius", ball_cfg.radius, "ball radius")->required();
  ball->add_option("--format", ball_cfg.format, "stdout format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->default_str("text");
  ball->add_option("--output", ball_cfg.output_dir, "output directory")
      ->envname("PSL2Z_SPECTRUM_OUTPUT_DIR");
  ball->add_flag("--dot", ball_cfg.dot, "also write a DOT graph (radius <= 6)");

  VerifyConfig verify_cfg;
  auto* verify = app.add_subcommand(
      "verify", "Verify typing, forbidden suffixes, growth and edge sums");
  verify->add_option("--radius", verify_cfg.radius, "ball radius (>= 4)")
      ->required();
  verify->add_option("--seed", verify_cfg.seed, "optimizer seed");
  verify->add_option("--tolerance", verify_cfg.tolerance, "optimizer tolerance");
  verify->add_option("--format", verify_cfg.format, "report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->default_str("text");
  verify->add_option("--output", verify_cfg.output_file,
                     "also write the report to this file");
  verify->add_option("--threads", verify_cfg.threads, "sweep thread count");
  verify->add_flag("--self-test", verify_cfg.self_test,
                   "corrupt the expected table to prove the sweep has teeth");

  BoundConfig bound_cfg;
  auto* bound = app.add_subcommand(
      "bound", "Optimize the valuation and certify the spectral bounds");
  bound->add_option("--tolerance", bound_cfg.tolerance, "optimizer tolerance");
  bound->add_option("--seed", bound_cfg.seed, "optimizer seed");
  bound->add_flag("--upper", bound_cfg.upper,
                  "also compute the ball Dirichlet upper bound");
  bound->add_option("--radius", bound_cfg.radius,
                    "ball radius for --upper (default 8)");
  bound->add_option("--check", bound_cfg.check_file,
                    "re-verify a stored certificate instead of optimizing");
  bound->add_option("--format", bound_cfg.format, "stdout format")
      ->check(CLI::IsMember({"text", "json"}))
      ->default_str("text");
  bound->add_option("--output", bound_cfg.output_file,
                    "write the certificate JSON to this file");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (CLI::ParseError const& e) {
    std::cerr << e.what() << "\n";
    return exit_usage;
  }

  try {
    if (app.got_subcommand(ball)) return run_ball(ball_cfg);
    if (app.got_subcommand(verify)) return run_verify(verify_cfg);
    return run_bound(bound_cfg);
  } catch (std::bad_alloc const&) {
    std::cerr << "out of memory\n";
    return exit_resources;
  } catch (std::length_error const& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return exit_resources;
  } catch (std::overflow_error const& e) {
    std::cerr << "arithmetic limit: " << e.what() << "\n";
    return exit_resources;
  } catch (std::invalid_argument const& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return exit_usage;
  } catch (std::logic_error const& e) {
    // a falsified structural invariant is a counterexample, not a crash
    std::cerr << "verification failure: " << e.what() << "\n";
    return exit_counterexample;
  } catch (std::runtime_error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_resources;
  }
}
