#include "rrtlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace rrtlab {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 480;
constexpr double kMarginL = 64;
constexpr double kMarginR = 20;
constexpr double kMarginT = 36;
constexpr double kMarginB = 48;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kPaletteSize = 6;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Canvas {
  std::string body;

  void line(double x1, double y1, double x2, double y2, const char* stroke,
            double width = 1.0) {
    body += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" +
            fmt(x2) + "\" y2=\"" + fmt(y2) + "\" stroke=\"" + stroke +
            "\" stroke-width=\"" + fmt(width) + "\"/>\n";
  }
  void text(double x, double y, const std::string& s, const char* anchor,
            int size = 12, const char* fill = "#000") {
    body += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-size=\"" +
            std::to_string(size) + "\" font-family=\"sans-serif\" fill=\"" +
            fill + "\" text-anchor=\"" + anchor + "\">" + escape(s) +
            "</text>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill,
            const char* stroke = "none") {
    body += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" +
            fmt(w) + "\" height=\"" + fmt(h) + "\" fill=\"" + fill +
            "\" stroke=\"" + std::string(stroke) + "\"/>\n";
  }
  void circle(double cx, double cy, double r, const std::string& fill,
              const char* stroke = "none") {
    body += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" +
            fmt(r) + "\" fill=\"" + fill + "\" stroke=\"" +
            std::string(stroke) + "\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts,
                const char* stroke, double width = 1.5) {
    if (pts.size() < 2) return;
    body += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) +
            "\" stroke-width=\"" + fmt(width) + "\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i) body += ' ';
      body += fmt(pts[i].first) + "," + fmt(pts[i].second);
    }
    body += "\"/>\n";
  }

  std::string finish(double w, double h) const {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) +
           "\" height=\"" + fmt(h) + "\" viewBox=\"0 0 " + fmt(w) + " " +
           fmt(h) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + fmt(w) + "\" height=\"" +
           fmt(h) + "\" fill=\"#ffffff\"/>\n";
    out += body;
    out += "</svg>\n";
    return out;
  }
};

// ~4-8 ticks at a 1/2/5 step
std::vector<double> nice_ticks(double lo, double hi) {
  std::vector<double> out;
  const double range = hi - lo;
  if (!(range > 0) || !std::isfinite(range)) return out;
  double step = std::pow(10.0, std::floor(std::log10(range / 4.0)));
  if (range / step > 8) step *= 2;
  if (range / step > 8) step *= 2.5;
  if (range / step > 8) step *= 2;
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + 1e-12 * range; t += step) {
    // snap values like 0.30000000000000004 back onto the grid
    out.push_back(std::fabs(t) < 1e-12 * range ? 0.0 : t);
    if (out.size() > 20) break;
  }
  return out;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;

  double map(double v, double px_lo, double px_hi) const {
    double x = log ? std::log10(v) : v;
    double a = log ? std::log10(lo) : lo;
    double b = log ? std::log10(hi) : hi;
    if (b <= a) b = a + 1;
    return px_lo + (x - a) / (b - a) * (px_hi - px_lo);
  }
};

Axis fit_axis(double lo, double hi, bool log) {
  Axis ax;
  ax.log = log;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    lo = log ? 1 : 0;
    hi = log ? 10 : 1;
  }
  if (log) {
    if (!(lo > 0)) lo = 1e-12;
    if (!(hi > lo)) hi = lo * 10;
    ax.lo = std::pow(10.0, std::floor(std::log10(lo)));
    ax.hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (ax.hi <= ax.lo) ax.hi = ax.lo * 10;
  } else {
    if (hi <= lo) hi = lo + 1;
    const double pad = 0.05 * (hi - lo);
    ax.lo = lo - pad;
    ax.hi = hi + pad;
  }
  return ax;
}

std::vector<double> axis_ticks(const Axis& ax) {
  if (!ax.log) return nice_ticks(ax.lo, ax.hi);
  std::vector<double> out;
  for (double t = ax.lo; t <= ax.hi * 1.0000001; t *= 10) {
    out.push_back(t);
    if (out.size() > 20) break;
  }
  return out;
}

void draw_frame(Canvas& c, const std::string& title, const std::string& x_label,
                const std::string& y_label, const Axis& ax, const Axis& ay) {
  const double x0 = kMarginL, x1 = kWidth - kMarginR;
  const double y0 = kHeight - kMarginB, y1 = kMarginT;
  c.line(x0, y0, x1, y0, "#000");
  c.line(x0, y0, x0, y1, "#000");
  for (double t : axis_ticks(ax)) {
    const double px = ax.map(t, x0, x1);
    c.line(px, y0, px, y0 + 4, "#000");
    c.text(px, y0 + 18, fmt_tick(t), "middle", 11);
  }
  for (double t : axis_ticks(ay)) {
    const double py = ay.map(t, y0, y1);
    c.line(x0 - 4, py, x0, py, "#000");
    c.text(x0 - 8, py + 4, fmt_tick(t), "end", 11);
    c.line(x0, py, x1, py, "#e0e0e0", 0.5);
  }
  c.text((x0 + x1) / 2, kHeight - 10, x_label, "middle");
  // y label rotated in place
  c.body += "<text x=\"16\" y=\"" + fmt((y0 + y1) / 2) +
            "\" font-size=\"12\" font-family=\"sans-serif\" "
            "text-anchor=\"middle\" transform=\"rotate(-90 16 " +
            fmt((y0 + y1) / 2) + ")\">" + escape(y_label) + "</text>\n";
  c.text((x0 + x1) / 2, 20, title, "middle", 14);
}

void draw_legend(Canvas& c, const std::vector<SvgSeries>& series) {
  if (series.size() < 2) return;
  double y = kMarginT + 14;
  for (size_t i = 0; i < series.size(); ++i) {
    if (series[i].label.empty()) continue;
    const char* color = kPalette[i % kPaletteSize];
    c.line(kWidth - kMarginR - 120, y - 4, kWidth - kMarginR - 100, y - 4,
           color, 2);
    c.text(kWidth - kMarginR - 94, y, series[i].label, "start", 11);
    y += 16;
  }
}

std::pair<Axis, Axis> fit_axes(const std::vector<SvgSeries>& series,
                               bool log_x, bool log_y) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const SvgSeries& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (log_x && !(x > 0)) continue;
      if (log_y && !(y > 0)) continue;
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  return {fit_axis(xlo, xhi, log_x), fit_axis(ylo, yhi, log_y)};
}

}  // namespace

std::string svg_bar_chart(const std::string& title, const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<std::string>& bar_labels,
                          const std::vector<double>& values) {
  Canvas c;
  double vmax = 0;
  for (double v : values) vmax = std::max(vmax, v);
  Axis ay = fit_axis(0, vmax > 0 ? vmax : 1, false);
  ay.lo = 0;  // bars always start at zero
  Axis ax;  // unused for placement, bars are evenly spaced
  const double x0 = kMarginL, x1 = kWidth - kMarginR;
  const double y0 = kHeight - kMarginB, y1 = kMarginT;

  c.line(x0, y0, x1, y0, "#000");
  c.line(x0, y0, x0, y1, "#000");
  for (double t : axis_ticks(ay)) {
    const double py = ay.map(t, y0, y1);
    c.line(x0 - 4, py, x0, py, "#000");
    c.text(x0 - 8, py + 4, fmt_tick(t), "end", 11);
    c.line(x0, py, x1, py, "#e0e0e0", 0.5);
  }
  const size_t n = values.size();
  if (n > 0) {
    const double slot = (x1 - x0) / static_cast<double>(n);
    const double bw = slot * 0.7;
    for (size_t i = 0; i < n; ++i) {
      const double cx = x0 + slot * (static_cast<double>(i) + 0.5);
      const double top = ay.map(values[i], y0, y1);
      c.rect(cx - bw / 2, top, bw, y0 - top, kPalette[0]);
      if (i < bar_labels.size() && n <= 40)
        c.text(cx, y0 + 18, bar_labels[i], "middle", 11);
    }
  }
  c.text((x0 + x1) / 2, kHeight - 10, x_label, "middle");
  c.body += "<text x=\"16\" y=\"" + fmt((y0 + y1) / 2) +
            "\" font-size=\"12\" font-family=\"sans-serif\" "
            "text-anchor=\"middle\" transform=\"rotate(-90 16 " +
            fmt((y0 + y1) / 2) + ")\">" + escape(y_label) + "</text>\n";
  c.text((x0 + x1) / 2, 20, title, "middle", 14);
  (void)ax;
  return c.finish(kWidth, kHeight);
}

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series,
                           bool log_x, bool log_y) {
  Canvas c;
  auto [ax, ay] = fit_axes(series, log_x, log_y);
  draw_frame(c, title, x_label, y_label, ax, ay);
  const double x0 = kMarginL, x1 = kWidth - kMarginR;
  const double y0 = kHeight - kMarginB, y1 = kMarginT;
  for (size_t i = 0; i < series.size(); ++i) {
    std::vector<std::pair<double, double>> px;
    for (const auto& [x, y] : series[i].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (log_x && !(x > 0)) continue;
      if (log_y && !(y > 0)) continue;
      px.emplace_back(ax.map(x, x0, x1), ay.map(y, y0, y1));
    }
    c.polyline(px, kPalette[i % kPaletteSize]);
  }
  draw_legend(c, series);
  return c.finish(kWidth, kHeight);
}

std::string svg_scatter(const std::string& title, const std::string& x_label,
                        const std::string& y_label,
                        const std::vector<SvgSeries>& series,
                        bool log_x, bool log_y) {
  Canvas c;
  auto [ax, ay] = fit_axes(series, log_x, log_y);
  draw_frame(c, title, x_label, y_label, ax, ay);
  const double x0 = kMarginL, x1 = kWidth - kMarginR;
  const double y0 = kHeight - kMarginB, y1 = kMarginT;
  for (size_t i = 0; i < series.size(); ++i) {
    for (const auto& [x, y] : series[i].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (log_x && !(x > 0)) continue;
      if (log_y && !(y > 0)) continue;
      c.circle(ax.map(x, x0, x1), ay.map(y, y0, y1), 2.5,
               kPalette[i % kPaletteSize]);
    }
  }
  draw_legend(c, series);
  return c.finish(kWidth, kHeight);
}

std::string svg_tree(const Tree& tree, const Workspace& ws,
                     const std::vector<State>& path,
                     const std::optional<GoalRegion>& goal) {
  Canvas c;
  // map workspace x/y onto the canvas preserving aspect ratio; y points up
  const double wx = ws.hi[0] - ws.lo[0];
  const double wy = ws.hi.size() > 1 ? ws.hi[1] - ws.lo[1] : 1.0;
  const double inner_w = kWidth - kMarginL - kMarginR;
  const double inner_h = kHeight - kMarginT - kMarginB;
  const double scale = std::min(inner_w / wx, inner_h / wy);
  const auto px = [&](double x) { return kMarginL + (x - ws.lo[0]) * scale; };
  const auto py = [&](double y) {
    const double lo = ws.lo.size() > 1 ? ws.lo[1] : 0.0;
    return kHeight - kMarginB - (y - lo) * scale;
  };
  const auto sy = [&](const State& s) { return s.size() > 1 ? s[1] : 0.0; };

  c.rect(px(ws.lo[0]), py(ws.hi.size() > 1 ? ws.hi[1] : 1.0), wx * scale,
         wy * scale, "#fafafa", "#000");
  for (const Obstacle& o : ws.obstacles) {
    if (o.shape == Obstacle::Shape::box) {
      c.rect(px(o.lo[0]), py(o.hi.size() > 1 ? o.hi[1] : 1.0),
             (o.hi[0] - o.lo[0]) * scale,
             (o.hi.size() > 1 ? o.hi[1] - o.lo[1] : 1.0) * scale, "#bbbbbb");
    } else {
      c.circle(px(o.center[0]), py(o.center.size() > 1 ? o.center[1] : 0.0),
               o.radius * scale, "#bbbbbb");
    }
  }
  for (const TreeNode& node : tree.nodes) {
    if (node.parent < 0) continue;
    const State& a = tree.nodes[static_cast<size_t>(node.parent)].state;
    const State& b = node.state;
    c.line(px(a[0]), py(sy(a)), px(b[0]), py(sy(b)), "#6699cc", 0.5);
  }
  if (goal && goal->center.size() >= 1) {
    c.circle(px(goal->center[0]),
             py(goal->center.size() > 1 ? goal->center[1] : 0.0),
             goal->radius * scale, "none", "#2ca02c");
  }
  std::vector<std::pair<double, double>> ppx;
  for (const State& s : path) ppx.emplace_back(px(s[0]), py(sy(s)));
  c.polyline(ppx, "#d62728", 2);
  if (!tree.nodes.empty()) {
    const State& root = tree.nodes[0].state;
    c.circle(px(root[0]), py(sy(root)), 3.5, "#000");
  }
  c.text(kWidth / 2, 20,
         "tree (" + std::to_string(tree.nodes.size()) + " nodes)", "middle",
         14);
  return c.finish(kWidth, kHeight);
}

}  // namespace rrtlab
