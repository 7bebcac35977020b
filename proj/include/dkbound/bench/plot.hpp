#pragma once

#include "dkbound/bench/runner.hpp"

#include <string>

namespace dkbound::bench {

/// SVG analogue of figure `figure` (1..8) drawn from a run's CSV table:
///   1, 3    scatter of bound and attained rho1 against degree extreme
///           difference, one marker class per comparison;
///   2, 4, 6, 7  boxplots of bound, c1 and c0 along the swept size;
///   5, 8    per-replicate bound, standard bound and attained distances.
/// Throws std::runtime_error when the table has no usable rows or belongs to
/// another scenario.
std::string render_figure(const CsvTable& table, int figure);

/// Reads `csv_path`, renders, and writes `out_path` only on success.
void plot_file(const std::string& csv_path, int figure, const std::string& out_path);

/// Accepts "3", "fig3" or a scenario id.
int parse_figure_id(const std::string& text);

}  // namespace dkbound::bench
