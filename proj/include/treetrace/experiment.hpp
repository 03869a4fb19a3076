#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treetrace/io.hpp"

namespace treetrace {

enum class ExperimentKind {
  trace_convergence,
  norm_equivalence,
  gate_sweep,
  diagnostics,
  kernel_check,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);
std::vector<std::string> experiment_names();

/// Batch experiment descriptor; parsed from JSON with path-to-field error
/// messages and fully validated before any computation runs.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::gate_sweep;
  std::string output = "experiment";  // basename of the CSV/sidecar pair
  std::uint64_t seed = 1;

  TreeParams tree;
  int tree_depth = 8;
  int samples_per_edge = 4;

  int dec_dim = 1;
  int dec_depth = 8;

  // gate-sweep
  double alpha_min = 0.1, alpha_max = 1.5;
  int alpha_steps = 57;

  // trace-convergence
  int level_min = 2, level_max = 12;
  Complex mix = Complex(0.7, 0.0);  // f = phi_rad + mix * phi_{(0,0,1)}

  // norm-equivalence
  int haar_min = 1, haar_max = 8;
  double r = 0.25;

  // kernel-check
  int corpus_count = 20;
  int support_generation = 3;

  static ExperimentConfig from_json(const json& j);
  json to_json() const;
  void validate() const;
};

/// Flat table of scalar results, bitwise-reproducible for a fixed config
/// and seed. CSV uses '.' decimals, ',' separators, LF endings, headers.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  json metadata;

  int column_index(const std::string& name) const;  // throws if missing
  void write_csv(const std::string& path) const;
  /// JSON sidecar: config echo, seed, code version, timestamp.
  void write_sidecar(const std::string& path) const;
};

ResultTable run(const ExperimentConfig& config);

/// Tidy (x, y...) projection of a table for external plotting; optional
/// log10 transform of the y columns for rate fits.
ResultTable emit_plot_data(const ResultTable& table, const std::string& x_col,
                           const std::vector<std::string>& y_cols, bool log10_y = false);

/// Random continuous piecewise-linear function: independent vertex values
/// and interior samples in [-1,1]^2, scaled by decay^n per generation.
TreeFunction random_tree_function(TreeFunction::Tree tree, int samples_per_edge,
                                  std::uint64_t seed, double decay = 1.0);

/// Random member of H1_c with f(o) = 0: supported on generations
/// <= support_generation, vanishing at the support-generation vertices.
TreeFunction random_compactly_supported(TreeFunction::Tree tree, int samples_per_edge,
                                        int support_generation, std::uint64_t seed);

}  // namespace treetrace
