#pragma once

#include <string>

namespace qgd {

// Dates are carried as days since 1970-01-01 (proleptic Gregorian).
using Date = int;

Date parse_date(const std::string& iso);  // "YYYY-MM-DD"
std::string format_date(Date d);
int year_of(Date d);

inline Date add_calendar_days(Date d, int days) { return d + days; }

}  // namespace qgd
