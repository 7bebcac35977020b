#include "dkbound/bench/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace dkbound::bench {

namespace {

const char* const kColors[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(x) < 1e-12 ? 0.0 : x);
  return buf;
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  char* end = nullptr;
  out = std::strtod(cell.c_str(), &end);
  return end == cell.c_str() + cell.size() && std::isfinite(out);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> t;
  for (double v = std::ceil(lo / step - 1e-9) * step; v <= hi + 1e-9 * step; v += step) t.push_back(v);
  return t;
}

class Svg {
 public:
  Svg(double w, double h) : w_(w), h_(h) {}

  void text(double x, double y, const std::string& s, const char* anchor = "middle", int size = 11,
            double rotate = 0.0) {
    os_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\"" << size
        << "\" text-anchor=\"" << anchor << "\"";
    if (rotate != 0.0) os_ << " transform=\"rotate(" << fmt(rotate) << " " << fmt(x) << " " << fmt(y) << ")\"";
    os_ << ">" << escape(s) << "</text>\n";
  }
  void line(double x1, double y1, double x2, double y2, const char* stroke = "#000",
            double width = 1.0, bool dashed = false) {
    os_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2) << "\" y2=\""
        << fmt(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(width) << "\"";
    if (dashed) os_ << " stroke-dasharray=\"4 3\"";
    os_ << "/>\n";
  }
  void rect(double x, double y, double w, double h, const char* fill, const char* stroke) {
    os_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w) << "\" height=\""
        << fmt(h) << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
  }
  void marker(int kind, double x, double y, const char* color, double size = 3.5) {
    switch (kind % 3) {
      case 0:
        os_ << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << fmt(size)
            << "\" fill=\"none\" stroke=\"" << color << "\"/>\n";
        break;
      case 1:
        rect(x - size, y - size, 2 * size, 2 * size, "none", color);
        break;
      default:
        os_ << "<polygon points=\"" << fmt(x) << "," << fmt(y - size) << " " << fmt(x - size) << ","
            << fmt(y + size) << " " << fmt(x + size) << "," << fmt(y + size) << "\" fill=\"none\" stroke=\""
            << color << "\"/>\n";
    }
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const char* color) {
    os_ << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      os_ << (i ? " " : "") << fmt(pts[i].first) << "," << fmt(pts[i].second);
    }
    os_ << "\"/>\n";
  }
  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w_) << "\" height=\"" << fmt(h_)
        << "\" viewBox=\"0 0 " << fmt(w_) << " " << fmt(h_) << "\" font-family=\"sans-serif\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n"
        << os_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double w_, h_;
  std::ostringstream os_;
};

// Data rectangle with linear axes.
struct Panel {
  double x0, y0, w, h;
  double xlo, xhi, ylo, yhi;

  double px(double x) const { return x0 + (x - xlo) / (xhi - xlo) * w; }
  double py(double y) const { return y0 + h - (y - ylo) / (yhi - ylo) * h; }

  void draw_axes(Svg& svg, const std::string& title, const std::string& xlabel,
                 const std::string& ylabel, bool numeric_x = true) const {
    svg.rect(x0, y0, w, h, "none", "#444");
    for (double t : nice_ticks(ylo, yhi)) {
      svg.line(x0 - 4, py(t), x0, py(t));
      svg.line(x0, py(t), x0 + w, py(t), "#e5e5e5", 0.5);
      svg.text(x0 - 6, py(t) + 4, tick_label(t), "end", 9);
    }
    if (numeric_x) {
      for (double t : nice_ticks(xlo, xhi)) {
        svg.line(px(t), y0 + h, px(t), y0 + h + 4);
        svg.text(px(t), y0 + h + 15, tick_label(t), "middle", 9);
      }
    }
    svg.text(x0 + w / 2, y0 - 8, title, "middle", 12);
    svg.text(x0 + w / 2, y0 + h + 30, xlabel, "middle", 10);
    svg.text(x0 - 40, y0 + h / 2, ylabel, "middle", 10, -90.0);
  }
};

std::pair<double, double> padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double d = std::max(1e-3, std::abs(lo) * 0.1);
    return {lo - d, hi + d};
  }
  const double pad = 0.06 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::vector<std::string> comparisons_in_order(const CsvTable& t) {
  const int c = t.column("comparison");
  std::vector<std::string> out;
  for (const auto& row : t.rows) {
    if (std::find(out.begin(), out.end(), row[c]) == out.end()) out.push_back(row[c]);
  }
  return out;
}

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

void legend(Svg& svg, double x, double y, const std::vector<std::string>& labels, bool markers) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double yy = y + 16.0 * static_cast<double>(i);
    const char* color = kColors[i % 4];
    if (markers) svg.marker(static_cast<int>(i), x + 6, yy - 4, color);
    else svg.line(x, yy - 4, x + 14, yy - 4, color, 2.0);
    svg.text(x + 20, yy, labels[i], "start", 10);
  }
}

std::string scatter_figure(const CsvTable& t, int figure) {
  const auto comps = comparisons_in_order(t);
  const int cx = t.column("degree_extreme_difference");
  const int ccmp = t.column("comparison");
  const char* ycols[] = {"extended_bound_rescaled", "rho1_rescaled"};
  const char* titles[] = {"(a) extended bound", "(b) attained rho1 / c"};
  Svg svg(900, 420);
  svg.text(450, 20, "Figure " + std::to_string(figure) + " analogue", "middle", 14);
  for (int p = 0; p < 2; ++p) {
    const int cy = t.column(ycols[p]);
    std::vector<std::tuple<double, double, int>> pts;
    for (const auto& row : t.rows) {
      double x, y;
      if (!parse_number(row[cx], x) || !parse_number(row[cy], y)) continue;
      const int k = static_cast<int>(std::find(comps.begin(), comps.end(), row[ccmp]) - comps.begin());
      pts.emplace_back(x, y, k);
    }
    if (pts.empty()) throw std::runtime_error("no plottable rows for " + std::string(ycols[p]));
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& [x, y, k] : pts) {
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
    const auto [xa, xb] = padded(xlo, xhi);
    const auto [ya, yb] = padded(ylo, yhi);
    Panel panel{70.0 + 430.0 * p, 50, 330, 300, xa, xb, ya, yb};
    panel.draw_axes(svg, titles[p], "degree extreme difference", ycols[p]);
    for (const auto& [x, y, k] : pts) svg.marker(k, panel.px(x), panel.py(y), kColors[k % 4]);
  }
  legend(svg, 760, 400 - 16.0 * static_cast<double>(comps.size()), comps, true);
  return svg.str();
}

std::string boxplot_figure(const CsvTable& t, int figure) {
  const auto comps = comparisons_in_order(t);
  const int csweep = t.column("sweep");
  const int cval = t.column("sweep_value");
  const int ccmp = t.column("comparison");
  std::vector<int> values;
  for (const auto& row : t.rows) {
    double v;
    if (parse_number(row[cval], v) &&
        std::find(values.begin(), values.end(), static_cast<int>(v)) == values.end()) {
      values.push_back(static_cast<int>(v));
    }
  }
  std::sort(values.begin(), values.end());
  const std::string sweep = t.rows.front()[csweep];
  const char* ycols[] = {"extended_bound_rescaled", "c1_opt", "c0_opt"};
  const double pw = 260, ph = 200;
  const double width = 80 + 3 * (pw + 70), height = 60 + comps.size() * (ph + 70);
  Svg svg(width, height);
  svg.text(width / 2, 20, "Figure " + std::to_string(figure) + " analogue", "middle", 14);
  bool any = false;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    for (int col = 0; col < 3; ++col) {
      const int cy = t.column(ycols[col]);
      std::map<int, std::vector<double>> groups;
      double ylo = 1e300, yhi = -1e300;
      for (const auto& row : t.rows) {
        double v, y;
        if (row[ccmp] != comps[ci] || !parse_number(row[cval], v) || !parse_number(row[cy], y)) continue;
        groups[static_cast<int>(v)].push_back(y);
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
      }
      if (groups.empty()) {
        ylo = 0;
        yhi = 1;
      }
      const auto [ya, yb] = padded(ylo, yhi);
      Panel panel{80 + col * (pw + 70), 50 + ci * (ph + 70), pw, ph, 0.0,
                  static_cast<double>(values.size()), ya, yb};
      panel.draw_axes(svg, comps[ci] + ": " + ycols[col], sweep, ycols[col], false);
      for (std::size_t k = 0; k < values.size(); ++k) {
        const double xc = panel.px(static_cast<double>(k) + 0.5);
        svg.text(xc, panel.y0 + ph + 15, std::to_string(values[k]), "middle", 9);
        auto it = groups.find(values[k]);
        if (it == groups.end()) continue;
        any = true;
        auto ys = it->second;
        std::sort(ys.begin(), ys.end());
        const double q1 = quantile(ys, 0.25), q2 = quantile(ys, 0.5), q3 = quantile(ys, 0.75);
        const double iqr = q3 - q1;
        double lo = q1, hi = q3;
        for (double y : ys) {
          if (y >= q1 - 1.5 * iqr) lo = std::min(lo, y);
          if (y <= q3 + 1.5 * iqr) hi = std::max(hi, y);
        }
        const double bw = 0.5 * pw / static_cast<double>(values.size());
        const char* color = kColors[ci % 4];
        svg.line(xc, panel.py(lo), xc, panel.py(q1), color);
        svg.line(xc, panel.py(q3), xc, panel.py(hi), color);
        svg.line(xc - bw / 4, panel.py(lo), xc + bw / 4, panel.py(lo), color);
        svg.line(xc - bw / 4, panel.py(hi), xc + bw / 4, panel.py(hi), color);
        svg.rect(xc - bw / 2, panel.py(q3), bw, std::max(0.5, panel.py(q1) - panel.py(q3)), "#f4f4f4", color);
        svg.line(xc - bw / 2, panel.py(q2), xc + bw / 2, panel.py(q2), color, 2.0);
        for (double y : ys) {
          if (y < lo || y > hi) svg.marker(0, xc, panel.py(y), color, 2.0);
        }
      }
    }
  }
  if (!any) throw std::runtime_error("no plottable rows");
  return svg.str();
}

std::string replicate_figure(const CsvTable& t, int figure) {
  const auto comps = comparisons_in_order(t);
  const int crep = t.column("replicate");
  const int ccmp = t.column("comparison");
  const char* ycols[] = {"standard_dk_rescaled", "extended_bound_rescaled", "rho2", "rho1_rescaled"};
  const std::vector<std::string> labels = {"standard DK", "extended bound", "rho2", "rho1 / c"};
  const double pw = 560, ph = 220;
  const double height = 70 + comps.size() * (ph + 70);
  Svg svg(pw + 240, height);
  svg.text((pw + 240) / 2, 20, "Figure " + std::to_string(figure) + " analogue", "middle", 14);
  bool any = false;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    std::vector<std::vector<std::pair<double, double>>> series(4);
    double xlo = 1e300, xhi = -1e300, ylo = 0.0, yhi = 1.0;
    for (const auto& row : t.rows) {
      double x;
      if (row[ccmp] != comps[ci] || !parse_number(row[crep], x)) continue;
      for (int s = 0; s < 4; ++s) {
        double y;
        if (!parse_number(row[t.column(ycols[s])], y)) continue;
        series[s].emplace_back(x + 1.0, y);
        xlo = std::min(xlo, x + 1.0);
        xhi = std::max(xhi, x + 1.0);
        yhi = std::max(yhi, y);
        any = true;
      }
    }
    if (xlo > xhi) {
      xlo = 1;
      xhi = 2;
    }
    const auto [xa, xb] = padded(xlo, xhi);
    Panel panel{80, 50 + ci * (ph + 70), pw, ph, xa, xb, ylo, yhi * 1.05};
    panel.draw_axes(svg, comps[ci], "replicate", "value");
    svg.line(panel.x0, panel.py(1.0), panel.x0 + pw, panel.py(1.0), "#999", 1.0, true);
    for (int s = 0; s < 4; ++s) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& [x, y] : series[s]) {
        pts.emplace_back(panel.px(x), panel.py(y));
        svg.marker(s, panel.px(x), panel.py(y), kColors[s], 2.5);
      }
      if (pts.size() > 1) svg.polyline(pts, kColors[s]);
    }
  }
  if (!any) throw std::runtime_error("no plottable rows");
  legend(svg, pw + 110, 70, labels, false);
  return svg.str();
}

}  // namespace

std::string render_figure(const CsvTable& table, int figure) {
  const std::string expected = scenario_of_figure(figure);
  if (table.rows.empty()) throw std::runtime_error("csv has no data rows");
  const int cs = table.column("scenario");
  for (const auto& row : table.rows) {
    if (row[cs] != expected) {
      throw std::runtime_error("figure " + std::to_string(figure) + " is drawn from " + expected +
                               ", csv holds " + row[cs]);
    }
  }
  switch (figure) {
    case 1:
    case 3: return scatter_figure(table, figure);
    case 5:
    case 8: return replicate_figure(table, figure);
    default: return boxplot_figure(table, figure);
  }
}

void plot_file(const std::string& csv_path, int figure, const std::string& out_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open " + csv_path);
  const CsvTable table = read_csv_table(in);
  const std::string svg = render_figure(table, figure);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << svg;
}

int parse_figure_id(const std::string& text) {
  std::string s = text;
  if (s.rfind("fig", 0) == 0) s = s.substr(3);
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const int f = std::stoi(s);
    scenario_of_figure(f);
    return f;
  }
  return figure_of(text);
}

}  // namespace dkbound::bench
