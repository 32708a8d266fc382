#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "xylab/errors.hpp"
#include "xylab/sweep.hpp"

namespace xylab {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 130.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

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

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct Extent {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-300) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

void frame(std::ostream& os, const std::string& title, const std::string& xlabel, const std::string& ylabel,
           const Extent& x, const Extent& y) {
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = kLeft + pw * i / 4.0;
    const double fy = kTop + ph - ph * i / 4.0;
    os << "<text x=\"" << fx << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
       << num(x.lo + (x.hi - x.lo) * i / 4.0) << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << fy + 4 << "\" text-anchor=\"end\">"
       << num(y.lo + (y.hi - y.lo) * i / 4.0) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 18 << "\" text-anchor=\"middle\">"
     << escape(xlabel) << "</text>\n";
  os << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << kTop + ph / 2 << ")\">" << escape(ylabel) << "</text>\n";
}

void save(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << content;
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace

void write_line_svg(const std::string& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, std::span<const Series> series) {
  Extent x, y;
  for (const Series& s : series) {
    for (double v : s.x) x.add(v);
    for (double v : s.y) y.add(v);
  }
  x.settle();
  y.settle();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + pw * (v - x.lo) / (x.hi - x.lo); };
  auto py = [&](double v) { return kTop + ph - ph * (v - y.lo) / (y.hi - y.lo); };

  std::ostringstream os;
  frame(os, title, xlabel, ylabel, x, y);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    const double ly = kTop + 14 + 18.0 * k;
    os << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - kRight + 30
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kWidth - kRight + 35 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  save(path, os.str());
}

void write_heatmap_svg(const std::string& path, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, std::span<const double> xs, std::span<const double> ys,
                       std::span<const double> values) {
  if (values.size() != xs.size() * ys.size()) throw ParameterError("heat map needs |xs| * |ys| values");
  Extent x, y, z;
  for (double v : xs) x.add(v);
  for (double v : ys) y.add(v);
  for (double v : values) z.add(v);
  x.settle();
  y.settle();
  z.settle();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const double cw = pw / xs.size();
  const double ch = ph / ys.size();

  auto color = [&](double v) {
    if (!std::isfinite(v)) return std::string("#888888");
    const double t = (v - z.lo) / (z.hi - z.lo);
    const int r = static_cast<int>(255 * std::clamp(1.5 * t - 0.2, 0.0, 1.0));
    const int g = static_cast<int>(255 * std::clamp(1.0 - std::abs(2.0 * t - 1.0), 0.0, 1.0) * 0.8);
    const int b = static_cast<int>(255 * std::clamp(1.2 - 1.5 * t, 0.0, 1.0));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return std::string(buf);
  };

  std::ostringstream os;
  frame(os, title, xlabel, ylabel, x, y);
  // values are row-major with xs outer
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      os << "<rect x=\"" << kLeft + cw * i << "\" y=\"" << kTop + ph - ch * (j + 1) << "\" width=\"" << cw + 0.5
         << "\" height=\"" << ch + 0.5 << "\" fill=\"" << color(values[i * ys.size() + j]) << "\"/>\n";
    }
  }
  for (int k = 0; k <= 10; ++k) {
    const double v = z.lo + (z.hi - z.lo) * k / 10.0;
    os << "<rect x=\"" << kWidth - kRight + 15 << "\" y=\"" << kTop + ph - ph * (k + 1) / 11.0
       << "\" width=\"20\" height=\"" << ph / 11.0 + 0.5 << "\" fill=\"" << color(v) << "\"/>\n";
    if (k % 5 == 0) {
      os << "<text x=\"" << kWidth - kRight + 40 << "\" y=\"" << kTop + ph - ph * (k + 0.5) / 11.0 + 4 << "\">"
         << num(v) << "</text>\n";
    }
  }
  os << "</svg>\n";
  save(path, os.str());
}

}  // namespace xylab
