#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dkbound::bench {

enum class Family { Gso, Gen, Pca };

/// Two matrices compared by one bound problem. `reverse_*` negate the matrix
/// so the block counts from the top of the spectrum.
struct ComparisonDef {
  std::string label;
  bool reverse_phi = false;
  bool reverse_psi = false;
};

/// One experiment. Graph scenarios sweep the node count n; PCA scenarios
/// sweep the sample count N or the dimension p while `fixed` holds the other.
struct Scenario {
  std::string id;
  Family family = Family::Gso;
  std::string sweep = "n";  // "n", "N" or "p"
  std::vector<int> grid;
  int fixed = 0;
  int K = 3;  // blocks (graphs) or spikes (PCA)
  double p_within = 0.0;
  double p_between = 0.0;
  int j = 0;
  int r = 1;
  int replicates = 1;
  std::uint64_t master_seed = 1;
  int max_resample = 100;
  bool full = false;

  std::vector<ComparisonDef> comparisons() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  /// Single-line `key=value` rendering of every field that affects the rows.
  std::string describe() const;
};

const std::vector<std::string>& scenario_ids();

/// Desk-scale preset, or the full-scale grid and replicate counts when `full` is set.
Scenario preset(std::string_view id, bool full = false);

/// Applies the section named after the scenario id from an INI file
/// (keys: grid, fixed, K, p_within, p_between, j, r, replicates, seed,
/// max_resample). Unknown keys are an error so typos do not pass silently.
void apply_config(Scenario& s, const std::string& ini_path);

/// Figure number (1..8) drawn from this scenario.
int figure_of(std::string_view scenario_id);
std::string scenario_of_figure(int figure);

}  // namespace dkbound::bench
