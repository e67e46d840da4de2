#include "rotsym/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rotsym/errors.hpp"

namespace rotsym {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw DomainError("row width does not match " + name);
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& c) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == c) return i;
  throw DomainError("no column " + c + " in " + name);
}

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    if (v[i].find_first_of(",\"\n") != std::string::npos) {
      s += '"';
      for (char c : v[i]) s += c == '"' ? std::string("\"\"") : std::string(1, c);
      s += '"';
    } else {
      s += v[i];
    }
  }
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

}  // namespace

void write_csv(const Table& t, const std::string& path) {
  std::string s = join(t.columns) + "\n";
  for (const auto& r : t.rows) s += join(r) + "\n";
  write_file(path, s);
}

Table read_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty csv " + path);
  t.columns = split(line);
  while (std::getline(in, line))
    if (!line.empty()) t.rows.push_back(split(line));
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

}  // namespace rotsym
