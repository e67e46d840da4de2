#include "rotsym/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rotsym/io.hpp"

namespace rotsym {

namespace {

constexpr double kW = 640, kH = 420, kL = 70, kR = 150, kT = 40, kB = 50;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f", v);
  return b;
}

std::string tick(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

}  // namespace

std::string render_svg(const Plot& p) {
  auto tx = [&](double v) { return p.logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return p.logy ? std::log10(std::abs(v)) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : p.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double a = tx(s.x[i]), b = ty(s.y[i]);
      if (!std::isfinite(a) || !std::isfinite(b)) continue;
      x0 = std::min(x0, a);
      x1 = std::max(x1, a);
      y0 = std::min(y0, b);
      y1 = std::max(y1, b);
    }
  if (!(x1 > x0)) x0 -= 1, x1 += 1;
  if (!(y1 > y0)) y0 -= 1, y1 += 1;
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  auto X = [&](double a) { return kL + (a - x0) / (x1 - x0) * pw; };
  auto Y = [&](double b) { return kT + ph - (b - y0) / (y1 - y0) * ph; };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kW) + "\" height=\"" +
                  num(kH) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kL) + "\" y=\"24\" font-size=\"14\">" + esc(p.title) + "</text>\n";
  s += "<rect x=\"" + num(kL) + "\" y=\"" + num(kT) + "\" width=\"" + num(pw) + "\" height=\"" +
       num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double a = x0 + (x1 - x0) * k / 4, b = y0 + (y1 - y0) * k / 4;
    s += "<text x=\"" + num(X(a)) + "\" y=\"" + num(kT + ph + 16) + "\" text-anchor=\"middle\">" +
         tick(p.logx ? std::pow(10, a) : a) + "</text>\n";
    s += "<text x=\"" + num(kL - 6) + "\" y=\"" + num(Y(b) + 4) + "\" text-anchor=\"end\">" +
         tick(p.logy ? std::pow(10, b) : b) + "</text>\n";
  }
  s += "<text x=\"" + num(kL + pw / 2) + "\" y=\"" + num(kH - 12) + "\" text-anchor=\"middle\">" +
       esc(p.xlabel) + "</text>\n";
  s += "<text transform=\"translate(16," + num(kT + ph / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" + esc(p.ylabel) + "</text>\n";
  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& se = p.series[k];
    const std::string col = kColors[k % 6];
    std::string pts;
    for (std::size_t i = 0; i < se.x.size(); ++i) {
      const double a = tx(se.x[i]), b = ty(se.y[i]);
      if (!std::isfinite(a) || !std::isfinite(b)) continue;
      if (se.points)
        s += "<circle cx=\"" + num(X(a)) + "\" cy=\"" + num(Y(b)) + "\" r=\"2.5\" fill=\"" + col +
             "\"/>\n";
      else
        pts += num(X(a)) + "," + num(Y(b)) + " ";
    }
    if (!se.points)
      s += "<polyline fill=\"none\" stroke=\"" + col + "\" stroke-width=\"1.5\" points=\"" + pts +
           "\"/>\n";
    const double ly = kT + 14 + 16 * k;
    s += "<rect x=\"" + num(kW - kR + 10) + "\" y=\"" + num(ly - 9) +
         "\" width=\"10\" height=\"10\" fill=\"" + col + "\"/>\n";
    s += "<text x=\"" + num(kW - kR + 26) + "\" y=\"" + num(ly) + "\">" + esc(se.label) +
         "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace rotsym
