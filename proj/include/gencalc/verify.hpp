#pragma once

#include <string>
#include <vector>

namespace gencalc {

struct FixtureResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// The built-in fixture suite run by `gencalc verify`.
std::vector<FixtureResult> run_fixtures();

}  // namespace gencalc
