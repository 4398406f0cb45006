#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace amvp::data {

/// Calendar date. Parsed from strict ISO-8601 (YYYY-MM-DD) only.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    /// Throws DataError on anything that is not a valid YYYY-MM-DD date.
    static Date parse(const std::string& text);

    std::string to_string() const;

    /// Days since 1970-01-01 (may be negative).
    std::int64_t serial() const;

    /// Inverse of serial().
    static Date from_serial(std::int64_t days);
};

bool is_leap_year(int year);
int days_in_month(int year, int month);

}  // namespace amvp::data
