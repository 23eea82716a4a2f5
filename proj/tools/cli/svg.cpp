#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "commands.hpp"
#include "io.hpp"
#include "regs/errors.hpp"
#include "regs/geometry.hpp"

namespace regs::cli {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 30, kTop = 40, kBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

class Canvas {
 public:
  Canvas(Range x, Range y, const std::string& title, const std::string& xlabel, const std::string& ylabel)
      : x_(x), y_(y) {
    x_.finish();
    y_.finish();
    out_ = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    text(kWidth / 2, 22, title, "middle", 14);
    text(kWidth / 2, kHeight - 15, xlabel, "middle");
    out_ += "<text transform=\"translate(18," + num(kHeight / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
            escape(ylabel) + "</text>\n";
    out_ += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kWidth - kLeft - kRight) +
            "\" height=\"" + num(kHeight - kTop - kBottom) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
      const double xv = x_.lo + (x_.hi - x_.lo) * k / 5.0;
      const double yv = y_.lo + (y_.hi - y_.lo) * k / 5.0;
      text(px(xv), kHeight - kBottom + 16, label(xv), "middle");
      text(kLeft - 6, py(yv) + 4, label(yv), "end");
    }
  }

  double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom); }

  void polyline(const std::vector<double>& x, const std::vector<double>& y, const std::string& color,
                const std::string& dash = "") {
    std::string pts;
    auto flush = [&] {
      if (pts.empty()) return;
      out_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"" +
              (dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"") + " points=\"" + pts + "\"/>\n";
      pts.clear();
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(y[i]) || y[i] < y_.lo || y[i] > y_.hi) {
        flush();
        continue;
      }
      pts += num(px(x[i])) + "," + num(py(y[i])) + " ";
    }
    flush();
  }

  void dot(double x, double y, const std::string& color, double r = 2.0) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    out_ += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"" + num(r) + "\" fill=\"" + color + "\"/>\n";
  }

  void legend(int row, const std::string& color, const std::string& name) {
    const double y = kTop + 14 + 16 * row;
    out_ += "<line x1=\"" + num(kLeft + 10) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft + 30) + "\" y2=\"" + num(y) +
            "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    text(kLeft + 36, y + 4, name, "start");
  }

  void raw(const std::string& s) { out_ += s; }

  void text(double x, double y, const std::string& s, const std::string& anchor, int size = 12) {
    out_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\" font-size=\"" +
            std::to_string(size) + "\">" + escape(s) + "</text>\n";
  }

  std::string finish() { return out_ + "</svg>\n"; }

 private:
  static std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '<') o += "&lt;";
      else if (c == '>') o += "&gt;";
      else if (c == '&') o += "&amp;";
      else o += c;
    }
    return o;
  }

  Range x_, y_;
  std::string out_;
};

// Blue (rough) to yellow (smooth).
std::string color_for(double t) {
  if (!std::isfinite(t)) return "#bbbbbb";
  t = std::clamp(t, 0.0, 1.0);
  const double stops[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  const double pos = t * 4.0;
  const int k = std::min(3, static_cast<int>(pos));
  const double f = pos - k;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[k][0] + f * (stops[k + 1][0] - stops[k][0])),
                static_cast<int>(stops[k][1] + f * (stops[k + 1][1] - stops[k][1])),
                static_cast<int>(stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string plot_profile(const json& r) {
  const int d = r.value("d", 1);
  Range xr, yr;
  for (const json& p : r["points"]) {
    for (const json& v : p["profile"]["m"]) xr.add(v.get<double>());
    for (const json& v : p["profile"]["ln_eta"]) yr.add(json_number(v));
  }
  // Worst-case growth (pi / (2 q))^(m - d/2), drawn through the first order.
  std::vector<std::vector<double>> refs;
  for (const json& p : r["points"]) {
    const auto& m = p["profile"]["m"];
    const double rate = std::log(std::numbers::pi / (2.0 * p["q"].get<double>()));
    std::vector<double> ref;
    for (const json& v : m) {
      ref.push_back((v.get<double>() - 0.5 * d) * rate);
      yr.add(ref.back());
    }
    refs.push_back(std::move(ref));
  }
  Canvas c(xr, yr, "Norm profile", "m", "ln eta(m)");
  std::size_t k = 0;
  for (const json& p : r["points"]) {
    std::vector<double> x, y;
    for (const json& v : p["profile"]["m"]) x.push_back(v.get<double>());
    for (const json& v : p["profile"]["ln_eta"]) y.push_back(json_number(v));
    const std::string color = kPalette[k % 6];
    c.polyline(x, y, color);
    c.polyline(x, refs[k], color, "5,4");
    std::string name = "z = (";
    for (std::size_t j = 0; j < p["z"].size(); ++j) name += (j ? ", " : "") + label(p["z"][j].get<double>());
    name += "), s~ = " + label(json_number(p["s_tilde"])) + ", dashed: (pi/2q)^(m-d/2)";
    c.legend(static_cast<int>(k), color, name);
    ++k;
  }
  return c.finish();
}

std::string plot_map(const json& r) {
  const int d = r.value("d", 1);
  const double m_max = r.value("m_max", 0.0);
  if (d == 1) {
    Range xr, yr;
    std::vector<std::pair<double, double>> pts;
    for (const json& p : r["points"]) {
      pts.emplace_back(p["z"][0].get<double>(), json_number(p["s_tilde"]));
      xr.add(pts.back().first);
      yr.add(pts.back().second);
    }
    yr.add(0.0);
    std::sort(pts.begin(), pts.end());
    Canvas c(xr, yr, "Regularity map (" + r.value("method", std::string("dense")) + ")", "x", "s~");
    std::vector<double> x, y;
    for (const auto& [a, b] : pts) {
      x.push_back(a);
      y.push_back(b);
      c.dot(a, b, color_for(m_max > 0.0 ? b / m_max : 0.5), 1.6);
    }
    c.polyline(x, y, "#999999");
    return c.finish();
  }
  Range xr, yr, sr;
  for (const json& p : r["points"]) {
    xr.add(p["z"][0].get<double>());
    yr.add(p["z"][1].get<double>());
    sr.add(json_number(p["s_tilde"]));
  }
  const double lo = sr.lo <= sr.hi ? sr.lo : 0.0;
  const double hi = m_max > 0.0 ? m_max : (sr.lo <= sr.hi ? sr.hi : 1.0);
  Canvas c(xr, yr, "Regularity map (" + r.value("method", std::string("dense")) + "), color: s~ from " + label(lo) +
                       " to " + label(hi),
           "x", "y");
  const double radius = std::clamp(200.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, r["points"].size()))),
                                   0.6, 4.0);
  for (const json& p : r["points"]) {
    const double s = json_number(p["s_tilde"]);
    c.dot(p["z"][0].get<double>(), p["z"][1].get<double>(), color_for(hi > lo ? (s - lo) / (hi - lo) : 0.5), radius);
  }
  return c.finish();
}

std::string plot_lower_bound(const json& r) {
  Range xr, yr;
  std::vector<double> m, bound, eta;
  for (const json& p : r["points"]) {
    m.push_back(p["m"].get<double>());
    const double b = json_number(p["bound"]);
    const double e = json_number(p["eta"]);
    bound.push_back(b > 0.0 ? std::log(b) : std::numeric_limits<double>::quiet_NaN());
    eta.push_back(e > 0.0 ? std::log(e) : std::numeric_limits<double>::quiet_NaN());
    xr.add(m.back());
    yr.add(bound.back());
    yr.add(eta.back());
  }
  Canvas c(xr, yr, "Band-limited lower bound", "m", "ln");
  c.polyline(m, eta, kPalette[0]);
  c.polyline(m, bound, kPalette[1], "5,4");
  c.legend(0, kPalette[0], "ln eta(m)");
  c.legend(1, kPalette[1], "ln lower bound");
  return c.finish();
}

}  // namespace

std::string render_svg(const json& report) {
  if (!report.is_object() || !report.contains("kind") || !report.contains("points")) {
    throw DataError("report", 0, "not a JSON report");
  }
  const std::string kind = report["kind"].get<std::string>();
  if (kind == "profile") return plot_profile(report);
  if (kind == "map") return plot_map(report);
  if (kind == "lower_bound") return plot_lower_bound(report);
  throw UsageError("cannot plot a report of kind '" + kind + "'");
}

}  // namespace regs::cli
