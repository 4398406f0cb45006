#pragma once

#include <istream>
#include <string>
#include <vector>

#include "amvp/panel.hpp"

namespace amvp::data {

/// Loads a wide price CSV: first column `date` (YYYY-MM-DD), one column per
/// asset, decimal prices, empty cells for missing data. Missing-data policy:
/// leading rows are dropped until every asset has a price, later gaps are
/// forward-filled, and any asset missing more than 10% of the kept rows'
/// cells is an error. Errors name the offending row/column.
PricePanel load_price_panel(std::istream& source, Calendar calendar);

/// Convenience overload reading from a file path.
PricePanel load_price_panel_file(const std::string& path, Calendar calendar);

/// Full-precision CSV emission; load_price_panel of the result reproduces the
/// panel exactly when no cells are missing.
std::string serialize_price_panel(const PricePanel& panel);

/// Splits one CSV record on commas. No quoting: fields are dates, numbers and
/// plain asset names.
std::vector<std::string> split_csv_line(const std::string& line);

/// Strict double parse; returns false on trailing garbage or empty input.
bool parse_double(const std::string& text, double& out);

}  // namespace amvp::data
