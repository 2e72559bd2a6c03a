#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qdefcs/observables.hpp"

namespace qdefcs::verify {

enum class Profile { Fast, Strict };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Report {
  Profile profile = Profile::Fast;
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool all_passed() const;
};

struct Options {
  // Expected-slope source; replaceable so a tampered constant is caught
  // by the negative-control test.
  std::function<SlopeSet(const DeformationParameter&)> slope_provider;
  unsigned threads = 0;
};

// Richardson-extrapolated slope of f at t = 0 over {h0, h0/2, h0/4};
// kills the O(t) and O(t^2) error terms of the one-sided quotient.
double richardson_slope(const std::function<double(double)>& f, double f0,
                        double h0 = 1e-2);

Report run(Profile profile, const Options& options = {});

// One "[PASS]/[FAIL] name: detail" line per check plus a summary line.
std::string format(const Report& report);

}  // namespace qdefcs::verify
