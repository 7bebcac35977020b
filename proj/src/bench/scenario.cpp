#include "dkbound/bench/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dkbound::bench {

namespace {

struct PresetRow {
  const char* id;
  Family family;
  const char* sweep;
  std::vector<int> desk_grid;
  std::vector<int> full_grid;
  int fixed;
  double p_within;
  double p_between;
  int j;
  int r;
  int desk_replicates;
  int full_replicates;
};

const std::vector<PresetRow>& table() {
  static const std::vector<PresetRow> rows = {
      {"gso-pairwise", Family::Gso, "n", {120}, {300}, 0, 0.6, 0.1, 1, 2, 10, 25},
      {"gso-nodes-sweep", Family::Gso, "n", {30, 60, 120}, {30, 120, 210, 300}, 0, 0.9, 0.1, 1, 2, 10, 25},
      {"gen-vs-gso", Family::Gen, "n", {120}, {210}, 0, 0.9, 0.1, 0, 3, 10, 25},
      {"gen-nodes-sweep", Family::Gen, "n", {30, 60, 120}, {30, 120, 210, 300}, 0, 0.8, 0.1, 0, 3, 10, 25},
      {"gen-attained-vs-bound", Family::Gen, "n", {30}, {30}, 0, 0.6, 0.1, 0, 3, 25, 25},
      {"pca-sample-sweep", Family::Pca, "N", {10, 100, 1000}, {10, 100, 1000}, 60, 0.8, 0.2, 0, 3, 10, 25},
      {"pca-dim-sweep", Family::Pca, "p", {30, 60, 120}, {30, 210, 420}, 100, 0.8, 0.2, 0, 3, 10, 25},
      {"pca-attained-vs-bound", Family::Pca, "N", {100}, {100}, 60, 0.6, 0.4, 0, 3, 25, 25},
  };
  return rows;
}

std::string join(const std::vector<int>& v, char sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? std::string(1, sep) : "") << v[i];
  return os.str();
}

// Shortest text that reads back to the same double.
std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<int> parse_grid(const std::string& text) {
  std::vector<int> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("grid entry is not an integer: " + item);
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<ComparisonDef> Scenario::comparisons() const {
  switch (family) {
    case Family::Gso:
      // Adjacency eigenvectors of interest sit at the top of its spectrum,
      // the Laplacians' at the bottom.
      return {{"A-vs-L", true, false}, {"L-vs-Lsym", false, false}, {"A-vs-Lsym", true, false}};
    case Family::Gen:
      return {{"A-vs-BA", true, true}, {"L-vs-BL", false, false}, {"Lsym-vs-BLsym", false, false}};
    case Family::Pca:
      return {{"SigmaHat-vs-Sigma", true, true}};
  }
  return {};
}

void Scenario::validate() const {
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("scenario " + id + ": " + what);
  };
  if (grid.empty()) fail("grid is empty");
  if (replicates < 1) fail("replicates must be >= 1");
  if (K < 1) fail("K must be >= 1");
  if (!(p_within >= 0.0 && p_between >= 0.0)) fail("probabilities must be non-negative");
  if (family != Family::Pca && (p_within > 1.0 || p_between > 1.0)) fail("probabilities must be <= 1");
  if (family == Family::Pca && p_within < p_between) fail("p_within must be >= p_between for a PSD P");
  if (max_resample < 1) fail("max_resample must be >= 1");
  for (int g : grid) {
    const int dim = family == Family::Pca ? (sweep == "p" ? g : fixed) : g;
    if (g < 1) fail("grid values must be positive");
    if (dim < K) fail("dimension " + std::to_string(dim) + " smaller than K");
    if (r < 1 || r > dim - 1 || j < 0 || j > dim - r) {
      fail("block (j=" + std::to_string(j) + ", r=" + std::to_string(r) + ") invalid for dimension " +
           std::to_string(dim));
    }
  }
  if (family == Family::Pca && fixed < 1) fail("fixed size must be positive");
}

std::string Scenario::describe() const {
  std::ostringstream os;
  os << "scenario=" << id << " seed=" << master_seed << " full=" << (full ? 1 : 0)
     << " sweep=" << sweep << " grid=" << join(grid, ';');
  if (family == Family::Pca) os << " fixed_" << (sweep == "p" ? "N" : "p") << "=" << fixed;
  os << " K=" << K << " p_within=" << shortest(p_within) << " p_between=" << shortest(p_between) << " j=" << j
     << " r=" << r << " replicates=" << replicates << " max_resample=" << max_resample;
  return os.str();
}

const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& row : table()) v.emplace_back(row.id);
    return v;
  }();
  return ids;
}

Scenario preset(std::string_view id, bool full) {
  for (const auto& row : table()) {
    if (id != row.id) continue;
    Scenario s;
    s.id = row.id;
    s.family = row.family;
    s.sweep = row.sweep;
    s.grid = full ? row.full_grid : row.desk_grid;
    s.fixed = row.fixed;
    s.p_within = row.p_within;
    s.p_between = row.p_between;
    s.j = row.j;
    s.r = row.r;
    s.replicates = full ? row.full_replicates : row.desk_replicates;
    s.full = full;
    return s;
  }
  throw std::invalid_argument("unknown scenario id: " + std::string(id));
}

void apply_config(Scenario& s, const std::string& ini_path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(ini_path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::runtime_error("config " + ini_path + ": " + e.what());
  }
  const auto section = tree.get_child_optional(s.id);
  if (!section) return;
  static const std::set<std::string> known = {"grid", "fixed", "K", "p_within", "p_between", "j",
                                              "r", "replicates", "seed", "max_resample"};
  for (const auto& [key, node] : *section) {
    if (!known.count(key)) {
      throw std::invalid_argument("config " + ini_path + ": unknown key [" + s.id + "] " + key);
    }
    const std::string value = node.get_value<std::string>();
    try {
      if (key == "grid") s.grid = parse_grid(value);
      else if (key == "fixed") s.fixed = std::stoi(value);
      else if (key == "K") s.K = std::stoi(value);
      else if (key == "p_within") s.p_within = std::stod(value);
      else if (key == "p_between") s.p_between = std::stod(value);
      else if (key == "j") s.j = std::stoi(value);
      else if (key == "r") s.r = std::stoi(value);
      else if (key == "replicates") s.replicates = std::stoi(value);
      else if (key == "seed") s.master_seed = std::stoull(value);
      else if (key == "max_resample") s.max_resample = std::stoi(value);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("config " + ini_path + ": bad value for " + key + ": " + value);
    }
  }
}

int figure_of(std::string_view scenario_id) {
  const auto& ids = scenario_ids();
  const auto it = std::find(ids.begin(), ids.end(), scenario_id);
  if (it == ids.end()) throw std::invalid_argument("unknown scenario id: " + std::string(scenario_id));
  return static_cast<int>(it - ids.begin()) + 1;
}

std::string scenario_of_figure(int figure) {
  const auto& ids = scenario_ids();
  if (figure < 1 || figure > static_cast<int>(ids.size())) {
    throw std::invalid_argument("figure must be 1.." + std::to_string(ids.size()));
  }
  return ids[figure - 1];
}

}  // namespace dkbound::bench
