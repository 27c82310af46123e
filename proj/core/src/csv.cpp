#include "ufd/csv.hpp"

#include <cstdio>
#include <fstream>

#include "ufd/errors.hpp"

namespace ufd {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_line(std::span<const double> cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += format_double(cells[i]);
  }
  return line;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << content;
  if (!out) throw ConfigError("write failed: " + path);
}

void Summary::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = value;
      return;
    }
  entries_.emplace_back(key, value);
}

void Summary::set(const std::string& key, double value) { set(key, format_double(value)); }

void Summary::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

void Summary::set_bool(const std::string& key, bool value) {
  set(key, std::string(value ? "true" : "false"));
}

std::string Summary::text() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

void Summary::write(const std::string& path) const { write_text_file(path, text()); }

}  // namespace ufd
