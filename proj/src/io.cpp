#include "xxzdm/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include <json.hpp>

namespace xxzdm {

std::string format_real(Real x)
{
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const SweepTable& t)
{
  for (const auto& [key, value] : t.meta)
    os << "# " << key << ": " << value << "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    os << t.columns[c] << ",";
  os << "flag\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (const Real cell : t.rows[r])
      os << format_real(cell) << ",";
    os << t.flags[r] << "\n";
  }
}

void write_json(std::ostream& os, const SweepTable& t)
{
  nlohmann::ordered_json doc;
  auto& meta = doc["meta"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : t.meta)
    meta[key] = value;
  auto& columns = doc["columns"] = nlohmann::ordered_json::array();
  for (const auto& name : t.columns)
    columns.push_back(name);
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      row[t.columns[c]] = t.rows[r][c];
    if (!t.flags[r].empty())
      row["flag"] = t.flags[r];
    rows.push_back(std::move(row));
  }
  os << doc.dump(2) << "\n";
}

} // namespace xxzdm
