#include "hdvgrid/charts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hdvgrid/core.hpp"

namespace hdvgrid {

namespace {

constexpr double kWidth = 860, kHeight = 460;
constexpr double kLeft = 80, kRight = 190, kTop = 40, kBottom = 70;
const char* const kPalette[] = {"#e6b400", "#3a7dc9", "#1b4f8a", "#6fa8dc", "#7a9a3a", "#b35806",
                                "#8c510a", "#555555", "#d95f02", "#e7298a", "#66a61e", "#a6761d",
                                "#7570b3", "#1b9e77", "#999999"};

std::string num(double v, int precision = 2) {
  if (!std::isfinite(v)) v = 0.0;
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, r.ptr);
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

const char* color(std::size_t i) { return kPalette[i % (sizeof kPalette / sizeof kPalette[0])]; }

// "Nice" axis step for a range.
double tick_step(double span) {
  if (span <= 0.0) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

struct Frame {
  double lo, hi;
  double y(double v) const { return kTop + (hi - v) / (hi - lo) * (kHeight - kTop - kBottom); }
};

Frame make_frame(double lo, double hi) {
  lo = std::min(lo, 0.0);
  hi = std::max(hi, 0.0);
  if (hi - lo < 1e-12) hi = lo + 1.0;
  const double step = tick_step(hi - lo);
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step};
}

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth, 0) << "\" height=\""
      << num(kHeight, 0) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(kWidth / 2, 0) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title) << "</text>\n";
}

void axes(std::ostringstream& out, const Frame& f, const std::string& unit) {
  const double step = tick_step(f.hi - f.lo);
  const double x0 = kLeft, x1 = kWidth - kRight;
  for (double v = f.lo; v <= f.hi + step * 1e-9; v += step) {
    const double y = f.y(v);
    out << "<line x1=\"" << num(x0) << "\" x2=\"" << num(x1) << "\" y1=\"" << num(y) << "\" y2=\"" << num(y)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
        << num(std::abs(v) < step * 1e-9 ? 0.0 : v, step < 1.0 ? 2 : 0) << "</text>\n";
  }
  out << "<line x1=\"" << num(x0) << "\" x2=\"" << num(x1) << "\" y1=\"" << num(f.y(0)) << "\" y2=\""
      << num(f.y(0)) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"16\" y=\"" << num((kTop + kHeight - kBottom) / 2) << "\" transform=\"rotate(-90 16 "
      << num((kTop + kHeight - kBottom) / 2) << ")\" text-anchor=\"middle\">" << escape(unit) << "</text>\n";
}

void legend(std::ostringstream& out, const std::vector<std::string>& names, const std::vector<bool>& line) {
  double y = kTop + 8;
  const double x = kWidth - kRight + 16;
  for (std::size_t i = 0; i < names.size(); ++i, y += 18) {
    if (line[i])
      out << "<line x1=\"" << num(x) << "\" x2=\"" << num(x + 14) << "\" y1=\"" << num(y) << "\" y2=\"" << num(y)
          << "\" stroke=\"" << color(i) << "\" stroke-width=\"2\"/>\n";
    else
      out << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 6) << "\" width=\"14\" height=\"12\" fill=\""
          << color(i) << "\"/>\n";
    out << "<text x=\"" << num(x + 20) << "\" y=\"" << num(y + 4) << "\">" << escape(names[i]) << "</text>\n";
  }
}

void save(const std::filesystem::path& path, std::ostringstream& out) {
  out << "</svg>\n";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError(path.string(), 0, "", "cannot write chart");
  f << out.str();
}

}  // namespace

void write_bar_chart(const std::filesystem::path& path, const std::string& title, const std::string& unit,
                     const std::vector<std::string>& labels, const std::vector<double>& values) {
  std::ostringstream out;
  open_svg(out, title);
  double lo = 0.0, hi = 0.0;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const Frame f = make_frame(lo, hi);
  axes(out, f, unit);
  const double slot = (kWidth - kLeft - kRight) / std::max<std::size_t>(1, labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double v = i < values.size() ? values[i] : 0.0;
    const double x = kLeft + slot * (static_cast<double>(i) + 0.15);
    const double top = f.y(std::max(v, 0.0)), bottom = f.y(std::min(v, 0.0));
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(top) << "\" width=\"" << num(slot * 0.7) << "\" height=\""
        << num(bottom - top) << "\" fill=\"" << color(1) << "\"/>\n";
    out << "<text x=\"" << num(x + slot * 0.35) << "\" y=\"" << num(top - 4) << "\" text-anchor=\"middle\">"
        << num(v, 3) << "</text>\n";
    out << "<text x=\"" << num(x + slot * 0.35) << "\" y=\"" << num(kHeight - kBottom + 16)
        << "\" text-anchor=\"end\" transform=\"rotate(-35 " << num(x + slot * 0.35) << ' '
        << num(kHeight - kBottom + 16) << ")\">" << escape(labels[i]) << "</text>\n";
  }
  save(path, out);
}

void write_stacked_bars(const std::filesystem::path& path, const std::string& title, const std::string& unit,
                        const std::vector<std::string>& groups, const std::vector<Series>& series) {
  std::ostringstream out;
  open_svg(out, title);
  double lo = 0.0, hi = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double pos = 0.0, neg = 0.0;
    for (const auto& s : series) {
      const double v = g < s.values.size() ? s.values[g] : 0.0;
      (v >= 0.0 ? pos : neg) += v;
    }
    hi = std::max(hi, pos);
    lo = std::min(lo, neg);
  }
  const Frame f = make_frame(lo, hi);
  axes(out, f, unit);
  const double slot = (kWidth - kLeft - kRight) / std::max<std::size_t>(1, groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double x = kLeft + slot * (static_cast<double>(g) + 0.15);
    double pos = 0.0, neg = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
      const double v = g < series[k].values.size() ? series[k].values[g] : 0.0;
      if (v == 0.0) continue;
      double a, b;
      if (v > 0.0) {
        a = f.y(pos + v);
        b = f.y(pos);
        pos += v;
      } else {
        a = f.y(neg);
        b = f.y(neg + v);
        neg += v;
      }
      out << "<rect x=\"" << num(x) << "\" y=\"" << num(a) << "\" width=\"" << num(slot * 0.7)
          << "\" height=\"" << num(b - a) << "\" fill=\"" << color(k) << "\"><title>" << escape(series[k].name)
          << ": " << num(v, 3) << "</title></rect>\n";
    }
    out << "<text x=\"" << num(x + slot * 0.35) << "\" y=\"" << num(kHeight - kBottom + 16)
        << "\" text-anchor=\"end\" transform=\"rotate(-35 " << num(x + slot * 0.35) << ' '
        << num(kHeight - kBottom + 16) << ")\">" << escape(groups[g]) << "</text>\n";
  }
  std::vector<std::string> names;
  for (const auto& s : series) names.push_back(s.name);
  legend(out, names, std::vector<bool>(names.size(), false));
  save(path, out);
}

void write_time_panel(const std::filesystem::path& path, const std::string& title, const std::string& unit,
                      const std::vector<Series>& stacked, const std::vector<Series>& lines) {
  std::ostringstream out;
  open_svg(out, title);
  std::size_t n = 0;
  for (const auto& s : stacked) n = std::max(n, s.values.size());
  for (const auto& s : lines) n = std::max(n, s.values.size());
  auto at = [](const Series& s, std::size_t h) { return h < s.values.size() ? s.values[h] : 0.0; };
  double lo = 0.0, hi = 0.0;
  for (std::size_t h = 0; h < n; ++h) {
    double pos = 0.0, neg = 0.0;
    for (const auto& s : stacked) (at(s, h) >= 0.0 ? pos : neg) += at(s, h);
    hi = std::max(hi, pos);
    lo = std::min(lo, neg);
    for (const auto& s : lines) {
      hi = std::max(hi, at(s, h));
      lo = std::min(lo, at(s, h));
    }
  }
  const Frame f = make_frame(lo, hi);
  axes(out, f, unit);
  const double w = (kWidth - kLeft - kRight) / std::max<std::size_t>(1, n);
  auto xh = [&](std::size_t h) { return kLeft + w * static_cast<double>(h); };
  for (std::size_t h = 0; h < n; h += 24)
    out << "<text x=\"" << num(xh(h) + 2) << "\" y=\"" << num(kHeight - kBottom + 16) << "\">h " << h
        << "</text>\n";
  // Stacked series as per-hour columns, positive and negative parts separately.
  std::vector<double> pos(n, 0.0), neg(n, 0.0);
  for (std::size_t k = 0; k < stacked.size(); ++k) {
    for (std::size_t h = 0; h < n; ++h) {
      const double v = at(stacked[k], h);
      if (v == 0.0) continue;
      double a, b;
      if (v > 0.0) {
        a = f.y(pos[h] + v);
        b = f.y(pos[h]);
        pos[h] += v;
      } else {
        a = f.y(neg[h]);
        b = f.y(neg[h] + v);
        neg[h] += v;
      }
      out << "<rect x=\"" << num(xh(h)) << "\" y=\"" << num(a) << "\" width=\"" << num(w) << "\" height=\""
          << num(b - a) << "\" fill=\"" << color(k) << "\"/>\n";
    }
  }
  for (std::size_t k = 0; k < lines.size(); ++k) {
    out << "<polyline fill=\"none\" stroke=\"" << color(stacked.size() + k) << "\" stroke-width=\"2\" points=\"";
    for (std::size_t h = 0; h < n; ++h) out << num(xh(h) + w / 2) << ',' << num(f.y(at(lines[k], h))) << ' ';
    out << "\"/>\n";
  }
  std::vector<std::string> names;
  std::vector<bool> is_line;
  for (const auto& s : stacked) {
    names.push_back(s.name);
    is_line.push_back(false);
  }
  for (const auto& s : lines) {
    names.push_back(s.name);
    is_line.push_back(true);
  }
  legend(out, names, is_line);
  save(path, out);
}

}  // namespace hdvgrid
