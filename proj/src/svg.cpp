#include "velobound/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace velobound {

namespace {

// Plot box geometry (SVG pixel units).
constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kLeft = 70.0, kRight = 770.0, kTop = 40.0, kBottom = 460.0;

std::string format6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                     const char* css_class, const char* stroke) {
  std::string out = "  <polyline class=\"";
  out += css_class;
  out += "\" fill=\"none\" stroke=\"";
  out += stroke;
  out += "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += format6(xs[i]) + "," + format6(ys[i]);
  }
  out += "\"/>\n";
  return out;
}

}  // namespace

std::string render_experiment_svg(const CsvFile& csv) {
  const int ti = csv.column_index("t");
  const int ii = csv.column_index("integrand");
  const int ci = csv.column_index("cumulative");
  if (ti < 0 || ii < 0 || ci < 0)
    throw std::runtime_error("svg: schema mismatch, need columns t,integrand,cumulative");

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format6(kWidth) +
         "\" height=\"" + format6(kHeight) + "\" viewBox=\"0 0 " + format6(kWidth) + " " +
         format6(kHeight) + "\">\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"" + format6(kWidth) + "\" height=\"" +
         format6(kHeight) + "\" fill=\"white\"/>\n";
  // Axes.
  out += "  <line x1=\"" + format6(kLeft) + "\" y1=\"" + format6(kBottom) + "\" x2=\"" +
         format6(kRight) + "\" y2=\"" + format6(kBottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += "  <line x1=\"" + format6(kLeft) + "\" y1=\"" + format6(kTop) + "\" x2=\"" +
         format6(kLeft) + "\" y2=\"" + format6(kBottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += "  <text x=\"" + format6(0.5 * (kLeft + kRight)) + "\" y=\"" +
         format6(kBottom + 30.0) + "\" font-size=\"14\" text-anchor=\"middle\">log10 t"
         "</text>\n";

  if (!csv.rows.empty()) {
    double tmin = csv.rows.front()[ti], tmax = tmin;
    double vmin = 0.0, vmax = 0.0;
    bool first = true;
    for (const auto& r : csv.rows) {
      if (!(r[ti] > 0.0)) throw std::runtime_error("svg: nonpositive time on a log axis");
      tmin = std::min(tmin, r[ti]);
      tmax = std::max(tmax, r[ti]);
      for (int c : {ii, ci}) {
        if (first && c == ii) vmin = vmax = r[c];
        vmin = std::min(vmin, r[c]);
        vmax = std::max(vmax, r[c]);
      }
      first = false;
    }
    const double lmin = std::log10(tmin), lmax = std::log10(tmax);
    const double lspan = (lmax > lmin) ? (lmax - lmin) : 1.0;
    const double vspan = (vmax > vmin) ? (vmax - vmin) : 1.0;

    // y-up group: y = 0 sits on the x axis, larger values plot upward.
    std::vector<double> xs, yint, ycum;
    for (const auto& r : csv.rows) {
      xs.push_back(kLeft + (std::log10(r[ti]) - lmin) / lspan * (kRight - kLeft));
      yint.push_back((r[ii] - vmin) / vspan * (kBottom - kTop));
      ycum.push_back((r[ci] - vmin) / vspan * (kBottom - kTop));
    }
    out += "  <g transform=\"translate(0," + format6(kBottom) + ") scale(1,-1)\">\n";
    out += "  " + polyline(xs, yint, "integrand", "#1f77b4");
    out += "  " + polyline(xs, ycum, "cumulative", "#d62728");
    out += "  </g>\n";
    out += "  <text x=\"" + format6(kRight - 180.0) + "\" y=\"" + format6(kTop + 10.0) +
           "\" font-size=\"13\" fill=\"#1f77b4\">integrand</text>\n";
    out += "  <text x=\"" + format6(kRight - 90.0) + "\" y=\"" + format6(kTop + 10.0) +
           "\" font-size=\"13\" fill=\"#d62728\">cumulative</text>\n";
    out += "  <text x=\"" + format6(kLeft) + "\" y=\"" + format6(kTop - 10.0) +
           "\" font-size=\"12\">y range [" + format6(vmin) + ", " + format6(vmax) +
           "]</text>\n";
  }

  out += "</svg>\n";
  return out;
}

}  // namespace velobound
