#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace qdyn {

// CSV cell. Doubles are rendered as %.16e (17 significant digits) so reruns
// of the same build are byte identical.
using CsvCell = std::variant<std::int64_t, double, std::string>;

std::string format_cell(const CsvCell& cell);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;

  std::string to_string() const;
  void write(const std::filesystem::path& path) const;
};

CsvTable read_csv(const std::filesystem::path& path);  // header + string cells

}  // namespace qdyn
