#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "copdes/config.hpp"

namespace copdes {

// One verified quantity of a reproduction target. Checks outside the
// comparison scope (cells the published source computed unreliably) are
// reported but do not gate the outcome.
struct CheckLine {
  std::string name;
  bool pass = false;
  bool in_scope = true;
  std::string detail;
};

struct ReproResult {
  std::vector<CheckLine> checks;
  bool pass() const {
    for (const CheckLine& c : checks)
      if (c.in_scope && !c.pass) return false;
    return true;
  }
};

// The two worked examples: the quadratic/quartic two-response linear model
// on [0, 1] and the bivariate logistic model on [0, 10] localized at
// beta1 = (-1, 1), beta2 = (-2, 0.5).
GaussianMarginProblem linear_example(const CopulaSpec& copula, bool estimate_alpha);
BinaryLogisticProblem binary_example(const CopulaSpec& copula, bool estimate_alpha);

// Reproduction targets. Each writes its CSV artifacts under out_dir (skipped
// when out_dir is empty) and returns per-check results.
ReproResult repro_fedorov(const std::filesystem::path& out_dir);
ReproResult repro_corollary(const std::filesystem::path& out_dir);
ReproResult repro_table1(const std::filesystem::path& out_dir);
ReproResult repro_table2(const std::filesystem::path& out_dir);
ReproResult repro_table3(const std::filesystem::path& out_dir);
ReproResult repro_binary_benchmark(const std::filesystem::path& out_dir);

// Runs one target by name (fedorov | corollary | table1 | table2 | table3 |
// binary-benchmark), logging one line per check; returns 0 when every
// in-scope check passes, 5 otherwise.
int run_repro(const std::string& target, const std::filesystem::path& out_dir,
              std::ostream& log);

}  // namespace copdes
