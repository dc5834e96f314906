#pragma once

#include <compare>
#include <string>

namespace findex {

// Calendar day stored as a serial day number (days since 1970-01-01).
// Cheap to compare and to do arithmetic on; formats as ISO-8601.
class Date {
  public:
    Date() : serial_(0) {}
    explicit Date(int serial) : serial_(serial) {}
    static Date from_ymd(int year, int month, int day);
    static Date parse(const std::string& iso);  // "YYYY-MM-DD", strict

    int serial() const { return serial_; }
    std::string to_string() const;
    int weekday() const;  // 0=Sunday .. 6=Saturday
    bool is_weekend() const {
        int w = weekday();
        return w == 0 || w == 6;
    }

    Date operator+(int days) const { return Date(serial_ + days); }
    int operator-(const Date& other) const { return serial_ - other.serial_; }
    auto operator<=>(const Date&) const = default;

  private:
    int serial_;
};

}  // namespace findex
