#include "opfid/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace opfid::csv {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

void write_column(const std::filesystem::path& path, const std::string& header,
                  const std::vector<double>& values) {
  std::string text = header + "\n";
  for (double v : values) {
    text += format_double(v);
    text += '\n';
  }
  write_text(path, text);
}

std::vector<double> read_column(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  std::vector<double> values;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header line");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(line, &pos);
    values.push_back(v);
  }
  return values;
}

}  // namespace opfid::csv
