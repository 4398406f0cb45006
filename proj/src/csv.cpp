#include "amvp/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "amvp/errors.hpp"

namespace amvp::data {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(current);
            current.clear();
        } else if (ch != '\r') {
            current.push_back(ch);
        }
    }
    fields.push_back(current);
    return fields;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

PricePanel load_price_panel(std::istream& source, Calendar calendar) {
    std::string line;
    if (!std::getline(source, line)) throw DataError("empty input: missing header row");
    const auto header = split_csv_line(line);
    if (header.empty() || header[0] != "date") {
        throw DataError("malformed header: first column must be 'date'");
    }
    if (header.size() < 2) throw DataError("malformed header: no asset columns");
    std::unordered_set<std::string> seen;
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i].empty()) {
            throw DataError("malformed header: empty asset name in column " + std::to_string(i + 1));
        }
        if (!seen.insert(header[i]).second) {
            throw DataError("malformed header: duplicate asset column '" + header[i] + "'");
        }
    }
    const std::size_t n_assets = header.size() - 1;

    constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
    std::vector<Date> dates;
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw DataError("row " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        Date date;
        try {
            date = Date::parse(fields[0]);
        } catch (const DataError& e) {
            throw DataError("row " + std::to_string(line_no) + ": " + e.what());
        }
        std::vector<double> row(n_assets, kMissing);
        for (std::size_t i = 0; i < n_assets; ++i) {
            const std::string& cell = fields[i + 1];
            if (cell.empty()) continue;
            double value = 0.0;
            if (!parse_double(cell, value)) {
                throw DataError("row " + std::to_string(line_no) + ", column '" + header[i + 1] +
                                "': unparseable price '" + cell + "'");
            }
            if (value <= 0.0) {
                throw DataError("row " + std::to_string(line_no) + ", column '" + header[i + 1] +
                                "': non-positive price " + cell);
            }
            row[i] = value;
        }
        dates.push_back(date);
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw DataError("need at least 2 data rows, got " + std::to_string(rows.size()));

    // Drop leading rows until every asset has a price, then forward-fill.
    std::size_t first_full = 0;
    while (first_full < rows.size()) {
        bool full = true;
        for (std::size_t i = 0; i < n_assets; ++i) full = full && !std::isnan(rows[first_full][i]);
        if (full) break;
        ++first_full;
    }
    if (rows.size() - first_full < 2) {
        throw DataError("fewer than 2 usable rows after dropping leading rows with missing prices");
    }

    // Missing-cell budget per asset over the kept rows.
    const std::size_t kept = rows.size() - first_full;
    for (std::size_t i = 0; i < n_assets; ++i) {
        std::size_t missing = 0;
        for (std::size_t t = first_full; t < rows.size(); ++t) missing += std::isnan(rows[t][i]) ? 1 : 0;
        if (static_cast<double>(missing) > 0.10 * static_cast<double>(kept)) {
            throw DataError("asset '" + header[i + 1] + "' is missing " + std::to_string(missing) +
                            " of " + std::to_string(kept) + " usable cells (limit 10%)");
        }
    }

    PricePanel panel;
    panel.calendar = calendar;
    panel.assets.assign(header.begin() + 1, header.end());
    panel.dates.assign(dates.begin() + static_cast<std::ptrdiff_t>(first_full), dates.end());
    const auto t_rows = rows.size() - first_full;
    panel.prices.resize(static_cast<Eigen::Index>(t_rows), static_cast<Eigen::Index>(n_assets));
    for (std::size_t t = 0; t < t_rows; ++t) {
        for (std::size_t i = 0; i < n_assets; ++i) {
            double value = rows[first_full + t][i];
            if (std::isnan(value)) value = panel.prices(static_cast<Eigen::Index>(t) - 1, static_cast<Eigen::Index>(i));
            panel.prices(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = value;
        }
    }
    panel.validate();
    return panel;
}

PricePanel load_price_panel_file(const std::string& path, Calendar calendar) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file '" + path + "'");
    return load_price_panel(in, calendar);
}

std::string serialize_price_panel(const PricePanel& panel) {
    std::ostringstream out;
    out << "date";
    for (const auto& asset : panel.assets) out << ',' << asset;
    out << '\n';
    char buf[40];
    for (std::size_t t = 0; t < panel.n_rows(); ++t) {
        out << panel.dates[t].to_string();
        for (Eigen::Index i = 0; i < panel.prices.cols(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", panel.prices(static_cast<Eigen::Index>(t), i));
            out << ',' << buf;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace amvp::data
