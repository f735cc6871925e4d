#include "lcf/driver/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "lcf/error.hpp"

namespace lcf::driver {

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw ContractViolation("table row width does not match the header");
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ContractViolation("no column named '" + name + "'");
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

void emit_csv(const Table& table, const std::filesystem::path& path) {
  if (table.empty()) throw Error("refusing to write empty history to " + path.string());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_csv(out, table);
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + ": missing header");
  {
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) t.columns.push_back(cell);
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw Error(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != t.columns.size()) throw Error(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace lcf::driver
