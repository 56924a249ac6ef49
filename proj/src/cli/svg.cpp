#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "bmcopula/cli.hpp"
#include "bmcopula/csv.hpp"

namespace bmcopula::cli {
namespace {

constexpr int kLevels = 64;
constexpr double kPlot = 440.0;
constexpr double kLeft = 70.0;
constexpr double kTop = 40.0;

// viridis, sampled at eight stops
constexpr std::array<std::array<double, 3>, 8> kStops = {{{68, 1, 84},
                                                         {70, 50, 127},
                                                         {54, 92, 141},
                                                         {39, 127, 142},
                                                         {31, 161, 135},
                                                         {74, 194, 109},
                                                         {159, 218, 58},
                                                         {253, 231, 37}}};

std::string colour(double f) {
  f = std::clamp(f, 0.0, 1.0) * (kStops.size() - 1);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(f), kStops.size() - 2);
  const double w = f - static_cast<double>(k);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround((1 - w) * kStops[k][c] + w * kStops[k + 1][c]));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

std::string num(double x) {
  // 2 decimals are plenty for pixel coordinates
  return format_number(std::round(x * 100.0) / 100.0);
}

}  // namespace

std::string render_heatmap(const GridValues& gv, std::string_view title, bool clip) {
  const auto& g = gv.grid;
  std::vector<double> finite;
  finite.reserve(gv.values.size());
  for (double x : gv.values)
    if (std::isfinite(x)) finite.push_back(x);
  double lo = 0.0, hi = 1.0;
  if (!finite.empty()) {
    std::sort(finite.begin(), finite.end());
    lo = finite.front();
    hi = finite.back();
    if (clip) hi = finite[static_cast<std::size_t>(std::floor(0.995 * static_cast<double>(finite.size() - 1)))];
  }
  if (!(hi > lo)) hi = lo + 1.0;

  // one path per colour level, rows run-length encoded in cell units
  std::map<int, std::string> paths;
  for (std::size_t j = 0; j < g.nv; ++j) {
    std::size_t i = 0;
    while (i < g.nu) {
      const double x = gv.at(i, j);
      const int level = std::isfinite(x) ? std::clamp(static_cast<int>((x - lo) / (hi - lo) * kLevels), 0, kLevels - 1)
                                         : -1;
      std::size_t len = 1;
      while (i + len < g.nu) {
        const double y = gv.at(i + len, j);
        const int l2 = std::isfinite(y) ? std::clamp(static_cast<int>((y - lo) / (hi - lo) * kLevels), 0, kLevels - 1)
                                        : -1;
        if (l2 != level) break;
        ++len;
      }
      paths[level] += "M" + std::to_string(i) + " " + std::to_string(j) + "h" + std::to_string(len) + "v1h-" +
                      std::to_string(len) + "z";
      i += len;
    }
  }

  const double sx = kPlot / static_cast<double>(g.nu);
  const double sy = kPlot / static_cast<double>(g.nv);
  const double du = (g.u_max - g.u_min) / static_cast<double>(g.nu - 1);
  const double dv = (g.v_max - g.v_min) / static_cast<double>(g.nv - 1);
  auto px = [&](double u) { return kLeft + ((u - g.u_min) / du + 0.5) * sx; };
  auto py = [&](double v) { return kTop + kPlot - ((v - g.v_min) / dv + 0.5) * sy; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"540\" viewBox=\"0 0 640 540\" "
       "font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"640\" height=\"540\" fill=\"white\"/>\n";
  s << "<text x=\"" << num(kLeft + kPlot / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(title) << "</text>\n";
  s << "<g transform=\"translate(" << num(kLeft) << " " << num(kTop + kPlot) << ") scale(" << sx << " " << -sy
    << ")\" shape-rendering=\"crispEdges\">\n";
  for (const auto& [level, d] : paths) {
    const std::string fill = level < 0 ? "#bbbbbb" : colour((level + 0.5) / kLevels);
    s << "<path fill=\"" << fill << "\" d=\"" << d << "\"/>\n";
  }
  s << "</g>\n";
  s << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(kPlot) << "\" height=\""
    << num(kPlot) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    if (tick >= g.u_min - 0.5 * du && tick <= g.u_max + 0.5 * du) {
      const double x = px(tick);
      s << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop + kPlot) << "\" x2=\"" << num(x) << "\" y2=\""
        << num(kTop + kPlot + 5) << "\" stroke=\"black\"/>";
      s << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + kPlot + 18) << "\" text-anchor=\"middle\">"
        << format_number(tick) << "</text>\n";
    }
    if (tick >= g.v_min - 0.5 * dv && tick <= g.v_max + 0.5 * dv) {
      const double y = py(tick);
      s << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft) << "\" y2=\""
        << num(y) << "\" stroke=\"black\"/>";
      s << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
        << format_number(tick) << "</text>\n";
    }
  }
  s << "<text x=\"" << num(kLeft + kPlot / 2) << "\" y=\"" << num(kTop + kPlot + 36)
    << "\" text-anchor=\"middle\">u</text>\n";
  s << "<text x=\"20\" y=\"" << num(kTop + kPlot / 2) << "\" text-anchor=\"middle\">v</text>\n";

  const double bx = kLeft + kPlot + 30;
  const double bh = kPlot / kLevels;
  for (int k = 0; k < kLevels; ++k)
    s << "<rect x=\"" << num(bx) << "\" y=\"" << num(kTop + kPlot - (k + 1) * bh) << "\" width=\"20\" height=\""
      << num(bh + 0.5) << "\" fill=\"" << colour((k + 0.5) / kLevels) << "\"/>\n";
  s << "<rect x=\"" << num(bx) << "\" y=\"" << num(kTop) << "\" width=\"20\" height=\"" << num(kPlot)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double f = k / 4.0;
    const double value = lo + f * (hi - lo);
    s << "<text x=\"" << num(bx + 26) << "\" y=\"" << num(kTop + kPlot - f * kPlot + 4) << "\">"
      << escape(format_number(std::round(value * 1e4) / 1e4)) << (clip && k == 4 ? "+" : "") << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace bmcopula::cli
