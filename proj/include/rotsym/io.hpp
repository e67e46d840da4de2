#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rotsym {

// shortest round-trip decimal form, so rewritten values are bit-identical
std::string fmt(double v);
std::string fmt(int v);
std::string fmt(std::size_t v);
std::string fmt(bool v);

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::size_t column(const std::string& c) const;
};

void write_csv(const Table& t, const std::string& path);
Table read_csv(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace rotsym
