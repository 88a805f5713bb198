#pragma once

// Fast self-checks of the deterministic identities and invariants the
// library relies on, for the CLI `verify` subcommand.

#include <string>
#include <vector>

namespace mixne {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_verification();

}  // namespace mixne
