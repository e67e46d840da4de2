#pragma once

#include <string>
#include <vector>

namespace rotsym {

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool points = false;  // scatter instead of polyline
};

struct Plot {
  std::string name;  // file stem
  std::string title, xlabel, ylabel;
  bool logx = false, logy = false;
  std::vector<Series> series;
};

std::string render_svg(const Plot& p);

}  // namespace rotsym
