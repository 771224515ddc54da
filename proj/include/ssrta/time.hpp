#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ssrta {

/// Exact rational time value.
///
/// Stored in lowest terms with a strictly positive denominator. Every
/// operation is exact; results that do not fit in 64-bit numerator and
/// denominator raise std::overflow_error instead of losing precision.
class Time {
public:
  constexpr Time() = default;
  constexpr Time(std::int64_t value) : num_(value) {}  // NOLINT: implicit by intent
  Time(std::int64_t num, std::int64_t den);

  /// Parses "p", "-p" or "p/q". Decimal points and exponents are rejected.
  static Time parse(std::string_view text);

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  constexpr bool is_integer() const { return den_ == 1; }

  std::int64_t floor() const;
  std::int64_t ceil() const;

  /// "p" for integers, "p/q" otherwise.
  std::string str() const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Time operator-() const;
  Time& operator+=(const Time& rhs);
  Time& operator-=(const Time& rhs);
  Time& operator*=(const Time& rhs);
  Time& operator/=(const Time& rhs);

  friend Time operator+(Time lhs, const Time& rhs) { return lhs += rhs; }
  friend Time operator-(Time lhs, const Time& rhs) { return lhs -= rhs; }
  friend Time operator*(Time lhs, const Time& rhs) { return lhs *= rhs; }
  friend Time operator/(Time lhs, const Time& rhs) { return lhs /= rhs; }

  friend constexpr bool operator==(const Time&, const Time&) = default;
  friend std::strong_ordering operator<=>(const Time& lhs, const Time& rhs);

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Time& t);

/// floor(a / b) and ceil(a / b) for b != 0.
std::int64_t floor_div(const Time& a, const Time& b);
std::int64_t ceil_div(const Time& a, const Time& b);

/// Least common multiple of two positive integers, overflow-checked.
std::int64_t checked_lcm(std::int64_t a, std::int64_t b);

}  // namespace ssrta
