// Command-line front end: `tarski <command> [options]`.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tarski/cli.hpp"

namespace {

using tarski::cli::Format;
using tarski::cli::JobConfig;

void add_group(CLI::App* sub, JobConfig& c, std::string& group) {
  sub->add_option("--group", group, "group spec: free:r, abelian:r, cyclic:n, sl2z[:ints]")
      ->capture_default_str();
  sub->add_option("--gens", c.generators, "comma-separated generator symbols");
  sub->add_option("--budget", c.vertex_budget, "vertex budget for ball enumeration")
      ->capture_default_str();
}

void add_sets(CLI::App* sub, JobConfig& c) {
  sub->add_option("--s1", c.s1, "first translating set, e.g. \"1,a\"")->capture_default_str();
  sub->add_option("--s2", c.s2, "second translating set, e.g. \"1,b,c\"")->capture_default_str();
}

void add_format(CLI::App* sub, bool& json_flag) {
  sub->add_flag("--json", json_flag, "emit JSON instead of text");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Paradoxical decompositions on finite Cayley balls"};
  app.require_subcommand(1);

  JobConfig c;
  bool json_flag = false;
  try {
    c.vertex_budget = tarski::cli::default_vertex_budget();
  } catch (const tarski::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  auto* ball = app.add_subcommand("ball", "enumerate a ball of the Cayley graph");
  add_group(ball, c, c.group);
  ball->add_option("--radius", c.radius)->capture_default_str();
  ball->add_option("--export", c.export_kind, "dump the patch: edges | json");
  add_format(ball, json_flag);

  auto* check = app.add_subcommand("check", "decide the doubling condition on a ball");
  add_group(check, c, c.group);
  add_sets(check, c);
  check->add_option("--radius", c.radius)->capture_default_str();
  add_format(check, json_flag);

  auto* violate = app.add_subcommand("violate", "search the smallest ball with a violator");
  add_group(violate, c, c.group);
  add_sets(violate, c);
  violate->add_option("--max-radius", c.max_radius)->capture_default_str();
  add_format(violate, json_flag);

  auto* decompose = app.add_subcommand("decompose", "build and verify decomposition pieces");
  add_group(decompose, c, c.group);
  add_sets(decompose, c);
  decompose->add_option("--radius", c.radius)->capture_default_str();
  add_format(decompose, json_flag);

  auto* audit = app.add_subcommand("forest-audit", "replay the spanning-forest counting argument");
  std::string audit_group = "free:3";
  add_group(audit, c, audit_group);
  audit->add_option("--radius", c.radius)->capture_default_str();
  audit->add_option("--pairs", c.pairs, "number of random (A1, A2) audits")->capture_default_str();
  audit->add_option("--samples", c.samples, "forests for interior degree statistics")
      ->capture_default_str();
  audit->add_option("--max-set-size", c.max_set_size)->capture_default_str();
  audit->add_option("--seed", c.seed)->capture_default_str();
  add_format(audit, json_flag);

  auto* free_check = app.add_subcommand("free-check", "look for short relations between g and h");
  add_group(free_check, c, c.group);
  free_check->set_help_flag("--help", "Print this help message and exit");
  free_check->add_option("--g", c.g, "first element (default: first generator)");
  free_check->add_option("--h", c.h, "second element (default: second generator)");
  free_check->add_option("--length", c.length, "maximum relation length")->capture_default_str();
  add_format(free_check, json_flag);

  auto* report = app.add_subcommand("report", "aggregate JSON outputs into Tarski bounds");
  report->add_option("inputs", c.inputs, "JSON files from check / decompose / free-check")
      ->required();
  add_format(report, json_flag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  c.format = json_flag ? Format::Json : Format::Text;

  try {
    if (*ball) return tarski::cli::cmd_ball(c, std::cout);
    if (*check) return tarski::cli::cmd_check(c, std::cout);
    if (*violate) return tarski::cli::cmd_violate(c, std::cout);
    if (*decompose) return tarski::cli::cmd_decompose(c, std::cout);
    if (*audit) {
      c.group = audit_group;
      return tarski::cli::cmd_forest_audit(c, std::cout);
    }
    if (*free_check) return tarski::cli::cmd_free_check(c, std::cout);
    if (*report) return tarski::cli::cmd_report(c, std::cout);
  } catch (const tarski::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
