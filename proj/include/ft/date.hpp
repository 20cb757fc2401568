#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace ft {

// Calendar day. Comparisons follow chronological order.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    // Days since 1970-01-01 (proleptic Gregorian).
    std::int64_t serial() const;

    static Date from_serial(std::int64_t days);

    // Parses strict "YYYY-MM-DD". Throws ParseError.
    static Date parse(const std::string& iso);

    std::string to_string() const;

    // Next day, skipping Saturdays and Sundays.
    Date next_weekday() const;

    int weekday() const; // 0 = Sunday .. 6 = Saturday
};

} // namespace ft
