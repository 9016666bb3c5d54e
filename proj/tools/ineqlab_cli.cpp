// ineqlab: bound queries, extremal searches, verification suites and the
// reproduction table for the weighted series inequality.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ineqlab/report.hpp"

namespace {

using namespace ineqlab;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("not a number: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty parameter list");
  return out;
}

double parse_single(const std::string& text, const char* flag) {
  const auto v = parse_list(text);
  if (v.size() != 1) throw std::invalid_argument(std::string(flag) + " takes one value unless --grid is given");
  return v.front();
}

unsigned threads_from_env() {
  if (const char* env = std::getenv("INEQLAB_THREADS")) return static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds, extremal search and verification for a weighted series inequality", "ineqlab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  std::uint64_t seed = 0;
  std::string out_path;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--out", out_path, "Write the report to FILE instead of standard output");

  std::string p_text = "1", q_text = "1", r_text = "1";
  bool grid = false;
  auto* bound = app.add_subcommand("bound", "Closed-form upper bounds on K(p,q,r)");
  bound->add_option("--p", p_text, "Exponent p (comma-separated list with --grid)")->required();
  bound->add_option("--q", q_text, "Exponent q (comma-separated list with --grid)")->required();
  bound->add_option("--r", r_text, "Exponent r (comma-separated list with --grid)")->required();
  bound->add_flag("--grid", grid, "Sweep the Cartesian product of the given lists");

  double sp = 1, sq = 1, sr = 1;
  SearchConfig cfg;
  auto* search = app.add_subcommand("search", "Numerical lower bound on K(p,q,r) by extremal search");
  search->add_option("--p", sp)->required();
  search->add_option("--q", sq)->required();
  search->add_option("--r", sr)->required();
  search->add_option("--n", cfg.n, "Sequence length (1..64)")->capture_default_str();
  search->add_option("--restarts", cfg.restarts)->capture_default_str();
  search->add_option("--max-iters", cfg.max_iters)->capture_default_str();
  search->add_option("--tol", cfg.tol)->capture_default_str();

  std::string suite;
  std::size_t trials = 10000;
  auto* verify = app.add_subcommand("verify", "Randomized checks of the supporting inequalities");
  verify->add_option("--suite", suite,
                     "copson, copson-dual, tail, tail-finite, eq2-dominance, eq3, eq4 or duality")
      ->required();
  verify->add_option("--trials", trials)->capture_default_str();

  auto* reproduce = app.add_subcommand("reproduce", "Table of the headline constants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::vector<std::string> invocation(argv, argv + argc);
  const unsigned threads = threads_from_env();
  report::CommandResult result;
  try {
    if (*bound) {
      if (grid) {
        result = report::cmd_bound_grid(parse_list(p_text), parse_list(q_text), parse_list(r_text), invocation);
      } else {
        const ParamTriple pr{parse_single(p_text, "--p"), parse_single(q_text, "--q"), parse_single(r_text, "--r")};
        result = report::cmd_bound(pr, invocation);
      }
    } else if (*search) {
      cfg.seed = seed;
      cfg.threads = threads;
      result = report::cmd_search({sp, sq, sr}, cfg, invocation);
    } else if (*verify) {
      result = report::cmd_verify(parse_suite(suite), trials, seed, threads, invocation);
    } else if (*reproduce) {
      result = report::cmd_reproduce(invocation);
    }
  } catch (const std::exception& e) {
    std::cerr << "ineqlab: " << e.what() << '\n';
    return 2;
  }

  const auto text = report::serialize(result.doc, report::parse_format(format));
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
      std::cerr << "ineqlab: cannot open " << out_path << '\n';
      return 2;
    }
    os << text;
  }
  if (result.exit_code == 1) {
    std::cerr << "ineqlab: verification failure; see report for the minimal-slack witness\n";
  }
  return result.exit_code;
}
