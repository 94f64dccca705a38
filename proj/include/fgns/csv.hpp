#pragma once

#include <string>
#include <vector>

namespace fgns {

// Round-trippable decimal text for a double (%.17g); "nan" / "inf" / "-inf".
std::string fmt(double v);

// In-memory table written in one go, rows kept in insertion order.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add(std::vector<std::string> row);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace fgns
