#include "trendboot/series_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace trendboot {
namespace {

bool parse_field(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::optional<SeriesRecord> SeriesReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> fields;
    bool ok = true;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      double v = 0.0;
      const auto piece = std::string_view(line).substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!parse_field(piece, v)) {
        ok = false;
        break;
      }
      fields.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    const std::string where = "series input line " + std::to_string(line_no_);
    if (!ok) {
      if (records_ == 0 && line_no_ == 1) continue;  // header row
      throw DataError(where + ": malformed record");
    }
    if (fields.size() > 3) throw DataError(where + ": too many columns");
    SeriesRecord rec;
    rec.x = fields.size() == 1 ? fields[0] : fields[1];
    if (fields.size() == 3) rec.m = fields[2];
    if (!std::isfinite(rec.x)) throw DataError(where + ": non-finite value");
    ++records_;
    return rec;
  }
  return std::nullopt;
}

SeriesInput read_series(std::istream& in) {
  SeriesReader reader(in);
  SeriesInput series;
  bool all_means = true;
  while (auto rec = reader.next()) {
    series.x.push_back(rec->x);
    if (rec->m) {
      series.m.push_back(*rec->m);
    } else {
      all_means = false;
    }
  }
  if (!all_means) series.m.clear();
  return series;
}

void write_series_csv(std::ostream& out, const SimOutput& sim) {
  out << "t,x,m\n";
  char buf[96];
  for (std::size_t k = 0; k < sim.x.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", k + 1, sim.x[k], sim.m[k]);
    out << buf;
  }
}

}  // namespace trendboot
