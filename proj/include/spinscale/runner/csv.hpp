#pragma once

#include <string>
#include <vector>

#include "spinscale/types.hpp"

namespace spinscale::runner {

// Plain CSV: '.' decimal point, ',' separator, one header row (column names
// carry their units). Numbers use %.17g so round-trips are exact and output
// is byte-identical across runs.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string format_csv(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

}  // namespace spinscale::runner
