// Acceptance suite: one line per criterion, nonzero exit if any fails.
// The same experiments back the `suite` subcommand of the CLI.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "catenoid/experiments.hpp"

int main(int argc, char** argv) {
  std::vector<int> selection;
  for (int i = 1; i < argc; ++i) selection.push_back(std::atoi(argv[i]));

  std::vector<catenoid::CriterionResult> results =
      catenoid::run_acceptance(selection, 20240801);

  bool all = true;
  for (const auto& r : results) {
    std::printf("%s  [%2d] %-55s (%.2f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.runtime_s);
    for (const auto& [k, v] : r.measured) std::printf("        %-34s %.10g\n", k.c_str(), v);
    if (!r.detail.empty()) std::printf("        note: %s\n", r.detail.c_str());
    all = all && r.pass;
  }
  catenoid::write_report_json(results, "acceptance_report.json");
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "CRITERIA FAILED");
  return all ? 0 : 2;
}
