#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "trendboot/dgp.hpp"

namespace trendboot {

struct SeriesRecord {
  double x = 0.0;
  std::optional<double> m;
};

/// Incremental reader for one observation per line, or comma-separated
/// records "t,x" / "t,x,m". A non-numeric first line is treated as a header;
/// blank lines are skipped. Malformed or non-finite records raise DataError.
class SeriesReader {
 public:
  explicit SeriesReader(std::istream& in) : in_(in) {}

  std::optional<SeriesRecord> next();

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
  std::size_t records_ = 0;
};

struct SeriesInput {
  std::vector<double> x;
  /// True means, present only when every record carried a third column.
  std::vector<double> m;
};

SeriesInput read_series(std::istream& in);

/// Write "t,x,m" records with a header row.
void write_series_csv(std::ostream& out, const SimOutput& sim);

}  // namespace trendboot
