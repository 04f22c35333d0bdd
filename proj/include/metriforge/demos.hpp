#pragma once

#include <string>
#include <vector>

namespace metriforge {

// A demo states one claim, runs the library end to end, and records every
// check it made.  Demos are the only place where an unexpected verdict is a
// failure rather than a result.
struct DemoResult {
  std::string name;
  std::string claim;
  bool passed = false;
  std::vector<std::string> checks;  // "ok: ..." or "FAIL: ..." per assertion
};

std::vector<std::string> demo_names();

// Throws DomainError for an unknown name.
DemoResult run_demo(const std::string& name);

}  // namespace metriforge
