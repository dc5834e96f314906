#include "findex/dates.hpp"

#include <cctype>
#include <cstdio>

#include "findex/errors.hpp"

namespace findex {

namespace {

// Civil <-> serial conversions after Howard Hinnant's public-domain algorithms.
int days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

void civil_from_days(int z, int& y, int& m, int& d) {
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int yr = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = yr + (m <= 2);
}

bool all_digits(const std::string& s, size_t from, size_t to) {
    for (size_t i = from; i < to; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

Date Date::from_ymd(int year, int month, int day) {
    if (month < 1 || month > 12 || day < 1 || day > 31)
        throw input_error("invalid calendar day: " + std::to_string(year) + "-" +
                          std::to_string(month) + "-" + std::to_string(day));
    Date d(days_from_civil(year, month, day));
    int y2, m2, d2;
    civil_from_days(d.serial_, y2, m2, d2);
    if (y2 != year || m2 != month || d2 != day)
        throw input_error("invalid calendar day: " + std::to_string(year) + "-" +
                          std::to_string(month) + "-" + std::to_string(day));
    return d;
}

Date Date::parse(const std::string& iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' || !all_digits(iso, 0, 4) ||
        !all_digits(iso, 5, 7) || !all_digits(iso, 8, 10))
        throw input_error("date not in YYYY-MM-DD form: '" + iso + "'");
    int y = std::stoi(iso.substr(0, 4));
    int m = std::stoi(iso.substr(5, 2));
    int d = std::stoi(iso.substr(8, 2));
    return from_ymd(y, m, d);
}

std::string Date::to_string() const {
    int y, m, d;
    civil_from_days(serial_, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

int Date::weekday() const {
    // 1970-01-01 was a Thursday (=4).
    int w = (serial_ + 4) % 7;
    return w < 0 ? w + 7 : w;
}

}  // namespace findex
