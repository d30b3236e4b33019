#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace momliq {

/// Calendar day (UTC). Crypto markets trade every day, so consecutive
/// calendar days are consecutive trading days.
using Date = std::chrono::sys_days;
using Days = std::chrono::days;

/// Parses strict ISO-8601 `YYYY-MM-DD`; throws ParseError otherwise.
Date parse_date(std::string_view text);

std::string format_date(Date date);

inline Date make_date(int y, unsigned m, unsigned d) {
    return Date{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

inline long days_between(Date from, Date to) { return (to - from).count(); }

}  // namespace momliq
