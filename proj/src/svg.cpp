#include "hfabm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace hfabm::svg {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  if (v == 0.0) return "0";
  const double a = std::fabs(v);
  if (a >= 1e4 || a < 1e-3)
    std::snprintf(buf, sizeof buf, "%.0e", v);
  else
    std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
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

struct Scale {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;
  double px_lo = 0.0;
  double px_hi = 1.0;

  double map(double v) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double t = ((log ? std::log10(v) : v) - a) / (b - a);
    return px_lo + t * (px_hi - px_lo);
  }
};

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) t.push_back(std::fabs(v) < step * 1e-9 ? 0.0 : v);
  return t;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> t;
  for (double e = std::ceil(std::log10(lo) - 1e-9); e <= std::log10(hi) + 1e-9; e += 1.0) t.push_back(std::pow(10.0, e));
  return t;
}

std::pair<double, double> padded(double lo, double hi, bool log) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) return log ? std::pair{1.0, 10.0} : std::pair{0.0, 1.0};
  if (log) {
    if (hi <= lo) return {lo / 2.0, lo * 2.0};
    return {lo, hi};
  }
  if (hi <= lo) return {lo - 0.5, lo + 0.5};
  const double pad = 0.04 * (hi - lo);
  return {lo - pad, hi + pad};
}

bool placeable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

struct Canvas {
  std::string body;
  int width;
  int height;

  Canvas(int w, int h) : width(w), height(h) {}

  std::string finish(const std::string& title) const {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
                    std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " +
                    std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
      s += "<text x=\"" + num(width / 2.0) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
           "</text>\n";
    s += body;
    s += "</svg>\n";
    return s;
  }
};

void draw_frame(Canvas& c, const Scale& x, const Scale& y, const Axes& axes, bool x_ticks = true) {
  const double x0 = kLeft, x1 = c.width - kRight, y0 = c.height - kBottom, y1 = kTop;
  c.body += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) + "\" height=\"" +
            num(y0 - y1) + "\" fill=\"none\" stroke=\"black\"/>\n";
  if (x_ticks)
    for (double t : x.log ? log_ticks(x.lo, x.hi) : linear_ticks(x.lo, x.hi)) {
      const double px = x.map(t);
      c.body += "<line x1=\"" + num(px) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(px) + "\" y2=\"" + num(y0 + 5) +
                "\" stroke=\"black\"/>\n";
      c.body += "<text x=\"" + num(px) + "\" y=\"" + num(y0 + 18) + "\" text-anchor=\"middle\">" + tick_label(t) +
                "</text>\n";
    }
  for (double t : y.log ? log_ticks(y.lo, y.hi) : linear_ticks(y.lo, y.hi)) {
    const double py = y.map(t);
    c.body += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(py) +
              "\" stroke=\"black\"/>\n";
    c.body += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" + tick_label(t) +
              "</text>\n";
  }
  for (double h : axes.hlines) {
    if (!placeable(h, y.log) || h < y.lo || h > y.hi) continue;
    const double py = y.map(h);
    c.body += "<line x1=\"" + num(x0) + "\" y1=\"" + num(py) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(py) +
              "\" stroke=\"#888\" stroke-dasharray=\"2,3\"/>\n";
  }
  c.body += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(c.height - 12.0) + "\" text-anchor=\"middle\">" +
            escape(axes.xlabel) + "</text>\n";
  c.body += "<text transform=\"translate(16," + num((y0 + y1) / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
            escape(axes.ylabel) + "</text>\n";
}

void draw_series(Canvas& c, const Series& s, const Scale& x, const Scale& y) {
  std::string pts;
  for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
    if (!placeable(s.x[i], x.log) || !placeable(s.y[i], y.log)) continue;
    const double px = x.map(s.x[i]);
    const double py = y.map(std::clamp(s.y[i], y.lo, y.hi));
    if (s.style == Style::Markers) {
      c.body += "<circle cx=\"" + num(px) + "\" cy=\"" + num(py) + "\" r=\"2.5\" fill=\"none\" stroke=\"" + s.color +
                "\"/>\n";
    } else {
      pts += num(px) + "," + num(py) + " ";
    }
  }
  if (!pts.empty()) {
    c.body += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"";
    if (s.style == Style::Dashed) c.body += " stroke-dasharray=\"6,4\"";
    c.body += " points=\"" + pts + "\"/>\n";
  }
}

void draw_legend(Canvas& c, const std::vector<const Series*>& series) {
  double y = kTop + 16;
  const double x = c.width - kRight - 170;
  for (const Series* s : series) {
    if (s->label.empty()) continue;
    if (s->style == Style::Markers)
      c.body += "<circle cx=\"" + num(x + 12) + "\" cy=\"" + num(y - 4) + "\" r=\"2.5\" fill=\"none\" stroke=\"" +
                s->color + "\"/>\n";
    else
      c.body += "<line x1=\"" + num(x) + "\" y1=\"" + num(y - 4) + "\" x2=\"" + num(x + 24) + "\" y2=\"" +
                num(y - 4) + "\" stroke=\"" + s->color + "\" stroke-width=\"1.5\"" +
                (s->style == Style::Dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
    c.body += "<text x=\"" + num(x + 30) + "\" y=\"" + num(y) + "\">" + escape(s->label) + "</text>\n";
    y += 16;
  }
}

std::pair<double, double> data_range(const std::vector<const std::vector<double>*>& values, bool log) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto* v : values)
    for (double d : *v)
      if (placeable(d, log)) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
  return {lo, hi};
}

Scale make_scale(std::pair<double, double> range, const std::optional<std::pair<double, double>>& lim, bool log,
                 double px_lo, double px_hi) {
  auto [lo, hi] = lim ? *lim : padded(range.first, range.second, log);
  if (log && lo <= 0.0) lo = hi > 0.0 ? hi * 1e-6 : 1e-6;
  if (hi <= lo) hi = lo + 1.0;
  return {lo, hi, log, px_lo, px_hi};
}

}  // namespace

std::string line_plot(const Axes& axes, const std::vector<Series>& series) {
  Canvas c(axes.width, axes.height);
  std::vector<const std::vector<double>*> xs, ys;
  for (const auto& s : series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  const Scale x = make_scale(data_range(xs, axes.log_x), axes.xlim, axes.log_x, kLeft, c.width - kRight);
  const Scale y = make_scale(data_range(ys, axes.log_y), axes.ylim, axes.log_y, c.height - kBottom, kTop);
  draw_frame(c, x, y, axes);
  std::vector<const Series*> refs;
  for (const auto& s : series) {
    draw_series(c, s, x, y);
    refs.push_back(&s);
  }
  draw_legend(c, refs);
  return c.finish(axes.title);
}

std::string box_plot(const Axes& axes, const std::vector<std::vector<double>>& groups,
                     const std::vector<std::string>& labels) {
  if (groups.size() != labels.size()) throw std::invalid_argument("box_plot: one label per group");
  Canvas c(axes.width, axes.height);
  std::vector<const std::vector<double>*> ys;
  for (const auto& g : groups) ys.push_back(&g);
  std::pair<double, double> range = data_range(ys, axes.log_y);
  for (double h : axes.hlines) {
    range.first = std::min(range.first, h);
    range.second = std::max(range.second, h);
  }
  const Scale y = make_scale(range, axes.ylim, axes.log_y, c.height - kBottom, kTop);
  const Scale x{0.5, static_cast<double>(groups.size()) + 0.5, false, kLeft, c.width - kRight};
  draw_frame(c, x, y, axes, false);

  const double half = 0.3 * (x.map(2.0) - x.map(1.0));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double cx = x.map(static_cast<double>(g + 1));
    c.body += "<text x=\"" + num(cx) + "\" y=\"" + num(c.height - kBottom + 18) + "\" text-anchor=\"middle\">" +
              escape(labels[g]) + "</text>\n";
    std::vector<double> v = groups[g];
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    auto q = [&](double p) {
      const double pos = p * static_cast<double>(v.size() - 1);
      const auto i = static_cast<std::size_t>(pos);
      const double f = pos - static_cast<double>(i);
      return i + 1 < v.size() ? v[i] * (1 - f) + v[i + 1] * f : v[i];
    };
    const double q1 = q(0.25), med = q(0.5), q3 = q(0.75), iqr = q3 - q1;
    double wlo = v.front(), whi = v.back();
    for (double d : v)
      if (d >= q1 - 1.5 * iqr) {
        wlo = d;
        break;
      }
    for (auto it = v.rbegin(); it != v.rend(); ++it)
      if (*it <= q3 + 1.5 * iqr) {
        whi = *it;
        break;
      }
    c.body += "<line x1=\"" + num(cx) + "\" y1=\"" + num(y.map(wlo)) + "\" x2=\"" + num(cx) + "\" y2=\"" +
              num(y.map(whi)) + "\" stroke=\"black\"/>\n";
    c.body += "<rect x=\"" + num(cx - half) + "\" y=\"" + num(y.map(q3)) + "\" width=\"" + num(2 * half) +
              "\" height=\"" + num(std::max(0.5, y.map(q1) - y.map(q3))) +
              "\" fill=\"#dbe8f5\" stroke=\"#1f4e79\"/>\n";
    c.body += "<line x1=\"" + num(cx - half) + "\" y1=\"" + num(y.map(med)) + "\" x2=\"" + num(cx + half) +
              "\" y2=\"" + num(y.map(med)) + "\" stroke=\"#b22222\" stroke-width=\"2\"/>\n";
    for (double d : v)
      if (d < wlo || d > whi)
        c.body += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(y.map(d)) + "\" r=\"2\" fill=\"none\" stroke=\"#555\"/>\n";
  }
  return c.finish(axes.title);
}

std::string dual_axis_plot(const Axes& axes, const Series& left, const Series& right, const std::string& right_label) {
  Canvas c(axes.width + 50, axes.height);
  const double right_edge = c.width - kRight - 50;
  const Scale x = make_scale(data_range({&left.x, &right.x}, false), axes.xlim, false, kLeft, right_edge);
  const Scale yl = make_scale(data_range({&left.y}, false), axes.ylim, false, c.height - kBottom, kTop);
  const Scale yr = make_scale(data_range({&right.y}, false), std::nullopt, false, c.height - kBottom, kTop);

  // Frame and left axis use the narrower plot area.
  Canvas inner(c.width - 50, c.height);
  draw_frame(inner, x, yl, axes);
  c.body += inner.body;
  for (double t : linear_ticks(yr.lo, yr.hi)) {
    const double py = yr.map(t);
    c.body += "<line x1=\"" + num(right_edge) + "\" y1=\"" + num(py) + "\" x2=\"" + num(right_edge + 5) + "\" y2=\"" +
              num(py) + "\" stroke=\"black\"/>\n";
    c.body += "<text x=\"" + num(right_edge + 8) + "\" y=\"" + num(py + 4) + "\">" + tick_label(t) + "</text>\n";
  }
  c.body += "<text transform=\"translate(" + num(c.width - 12.0) + "," + num((c.height - kBottom + kTop) / 2) +
            ") rotate(90)\" text-anchor=\"middle\">" + escape(right_label) + "</text>\n";
  draw_series(c, left, x, yl);
  draw_series(c, right, x, yr);
  Canvas legend(c.width - 50, c.height);
  draw_legend(legend, {&left, &right});
  c.body += legend.body;
  return c.finish(axes.title);
}

}  // namespace hfabm::svg
