#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "copdes/optimizer.hpp"
#include "copdes/tables.hpp"

namespace copdes {

// A fully described design problem plus optimizer settings, parsed from a
// schema-versioned JSON document. Every optimizer field is optional; the
// copula takes exactly one of "alpha" or "tau" (tau converted at load).
struct ProblemConfig {
  Problem problem;
  OptimizerConfig optimizer;

  static ProblemConfig load(const std::filesystem::path& path);
  static ProblemConfig from_json_text(const std::string& text);

  // Canonical serialization of the problem (not the optimizer settings) and
  // its FNV-1a 64 hash, recorded in design files for round-trip checks.
  std::string problem_json() const;
  std::string problem_hash() const;
};

struct DesignFileMeta {
  std::string problem_hash;
  std::string problem_json;  // canonical serialization of the problem
  bool certified = false;
  double max_sensitivity = 0.0;
  double bound = 0.0;
  double log_det = 0.0;
};

// On-disk design: point/weight arrays plus provenance metadata. Loading
// enforces the DesignMeasure invariants.
struct DesignFile {
  DesignMeasure design;
  DesignFileMeta meta;

  static DesignFile load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

// Canonical JSON serialization of a problem (sorted keys, shortest
// round-trip numbers); the basis of the problem hash.
std::string problem_json(const Problem& problem);
std::string problem_hash(const Problem& problem);

// 17-significant-digit decimal rendering used for every CSV cell.
std::string format_g17(double value);

void write_profile_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<double, double>>& profile);
void write_trace_csv(const std::filesystem::path& path, const OptimizationTrace& trace);
void write_loss_table_csv(const std::filesystem::path& path, const LossTable& table);
void write_misspec_table_csv(const std::filesystem::path& path, const MisspecTable& table);
void write_matrix_csv(const std::filesystem::path& path, const InfoMatrix& m);

// Aligned plain-text renderings for terminal output.
std::string loss_table_text(const LossTable& table);
std::string misspec_table_text(const MisspecTable& table);
std::string design_text(const DesignMeasure& design);

}  // namespace copdes
