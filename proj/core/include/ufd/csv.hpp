#pragma once

#include <span>
#include <string>
#include <vector>

namespace ufd {

/// 17-significant-digit decimal rendering ("%.17g"): round-trips doubles,
/// '.' decimal separator, scientific notation whenever |x| < 1e-4. The
/// same bytes for the same double, which is what makes run outputs
/// reproducible byte for byte.
std::string format_double(double x);

/// One CSV line from numeric cells.
std::string csv_line(std::span<const double> cells);

void write_text_file(const std::string& path, const std::string& content);

/// Key-value summary ("key = value" per line, insertion order preserved).
class Summary {
public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void set_bool(const std::string& key, bool value);
  std::string text() const;
  void write(const std::string& path) const;

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace ufd
