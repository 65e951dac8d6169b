#include "coexist/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace coexist {

namespace {

constexpr double W = 640, H = 400, ML = 56, MR = 16, MT = 16, MB = 36;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string solution_svg(const Grid& g, const dvec& x1, const dvec& x2,
                         std::optional<Interval> J, std::optional<std::array<double, 2>> r,
                         std::optional<std::array<double, 2>> R) {
  double ymax = std::max(x1.maxCoeff(), x2.maxCoeff());
  if (R) ymax = std::max({ymax, (*R)[0], (*R)[1]});
  if (ymax <= 0) ymax = 1;
  ymax *= 1.05;

  auto px = [&](double t) { return ML + t * (W - ML - MR); };
  auto py = [&](double y) { return H - MB - y / ymax * (H - MT - MB); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" +
       num(H) + "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (J)
    s += "<rect x=\"" + num(px(J->lo)) + "\" y=\"" + num(MT) + "\" width=\"" +
         num(px(J->hi) - px(J->lo)) + "\" height=\"" + num(H - MT - MB) +
         "\" fill=\"#f2f2f2\"/>\n";

  s += "<line x1=\"" + num(ML) + "\" y1=\"" + num(H - MB) + "\" x2=\"" + num(W - MR) +
       "\" y2=\"" + num(H - MB) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(ML) + "\" y1=\"" + num(MT) + "\" x2=\"" + num(ML) + "\" y2=\"" +
       num(H - MB) + "\" stroke=\"black\"/>\n";

  auto guide = [&](double y, const char* color, const std::string& label) {
    if (y <= 0 || y > ymax) return std::string();
    std::string out = "<line x1=\"" + num(ML) + "\" y1=\"" + num(py(y)) + "\" x2=\"" +
                      num(W - MR) + "\" y2=\"" + num(py(y)) + "\" stroke=\"" + color +
                      "\" stroke-dasharray=\"4 3\"/>\n";
    out += "<text x=\"" + num(W - MR - 4) + "\" y=\"" + num(py(y) - 3) +
           "\" font-size=\"10\" text-anchor=\"end\" fill=\"" + color + "\">" + label +
           "</text>\n";
    return out;
  };
  if (r) {
    s += guide((*r)[0], "#996666", "r1");
    s += guide((*r)[1], "#669966", "r2");
  }
  if (R) {
    s += guide((*R)[0], "#996666", "R1");
    s += guide((*R)[1], "#669966", "R2");
  }

  auto polyline = [&](const dvec& x, const char* color) {
    std::string pts;
    for (int i = 0; i < g.size(); ++i)
      pts += num(px(g.node(i))) + "," + num(py(std::max(0.0, x[i]))) + " ";
    return "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  };
  s += polyline(x1, "#aa2222");
  s += polyline(x2, "#227722");

  s += "<text x=\"" + num((ML + W - MR) / 2) + "\" y=\"" + num(H - 8) +
       "\" font-size=\"12\" text-anchor=\"middle\">t</text>\n";
  s += "<text x=\"" + num(ML + 8) + "\" y=\"" + num(MT + 12) +
       "\" font-size=\"12\" fill=\"#aa2222\">x1</text>\n";
  s += "<text x=\"" + num(ML + 40) + "\" y=\"" + num(MT + 12) +
       "\" font-size=\"12\" fill=\"#227722\">x2</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace coexist
