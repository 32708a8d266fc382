#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace xylab {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Self-check suite behind `xylab verify`: free-fermion energies and partition
// functions against dense ED, occupancy enumeration, geometric measure of
// small states against closed forms and brute force, the W-state population,
// population-exponent bounds, the V-line overlap trend and a state-dump round
// trip through `scratch_dir`.
std::vector<CheckResult> run_verification(const std::filesystem::path& scratch_dir);

void print_report(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace xylab
