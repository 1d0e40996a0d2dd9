#include "librot/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "librot/io/csv.hpp"

namespace librot::io {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string xml_escape(const std::string& s) {
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

std::string num(double v) { return format_number(v); }

}  // namespace

void write_svg_lines(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series) {
  constexpr double W = 760, H = 480;
  constexpr double ml = 78, mr = 18, mt = 42, mb = 56;
  const double pw = W - ml - mr, ph = H - mt - mb;

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  if (!(x_min < x_max)) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (!(y_min < y_max)) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  const auto py = [&](double y) { return mt + (y_max - y) / (y_max - y_min) * ph; };

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        "font-family=\"sans-serif\">"
     << xml_escape(title) << "</text>\n";

  // frame and ticks
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = x_min + (x_max - x_min) * i / 5.0;
    const double fy = y_min + (y_max - y_min) * i / 5.0;
    os << "<line x1=\"" << px(fx) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(fx)
       << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#333\"/>\n"
       << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 20
       << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
       << num(fx) << "</text>\n"
       << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << ml << "\" y2=\""
       << py(fy) << "\" stroke=\"#333\"/>\n"
       << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 4
       << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << num(fy)
       << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 14
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
     << xml_escape(xlabel) << "</text>\n"
     << "<text x=\"18\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
        "transform=\"rotate(-90 18 "
     << mt + ph / 2 << ")\">" << xml_escape(ylabel) << "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 6];
    std::string points;
    bool open = false;
    const auto flush = [&] {
      if (open && !points.empty())
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
           << points << "\"/>\n";
      points.clear();
      open = false;
    };
    for (size_t i = 0; i < series[s].x.size() && i < series[s].y.size(); ++i) {
      if (!std::isfinite(series[s].x[i]) || !std::isfinite(series[s].y[i])) {
        flush();
        continue;
      }
      points += num(px(series[s].x[i])) + "," + num(py(series[s].y[i])) + " ";
      open = true;
    }
    flush();
    os << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 18 + 16 * s << "\" font-size=\"12\" "
       << "font-family=\"sans-serif\" fill=\"" << color << "\">" << xml_escape(series[s].label)
       << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace librot::io
