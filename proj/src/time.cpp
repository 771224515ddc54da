#include "ssrta/time.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <ostream>

namespace ssrta {

namespace {

__extension__ typedef __int128 wide;

std::int64_t narrow(wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("Time: rational arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

wide wgcd(wide a, wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    wide r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Time make(wide num, wide den) {
  if (den == 0) throw std::domain_error("Time: division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  wide g = wgcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Time(narrow(num), narrow(den));
}

std::int64_t floor_of(wide num, wide den) {
  wide q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return narrow(q);
}

}  // namespace

Time::Time(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Time: zero denominator");
  wide n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  wide g = wgcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
}

Time Time::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  if (text.find_first_of(".eE") != std::string_view::npos)
    throw std::invalid_argument("floating-point literal '" + std::string(text) +
                                "' not allowed; use an integer or p/q");
  auto parse_int = [&](std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Time(parse_int(text));
  std::int64_t n = parse_int(text.substr(0, slash));
  std::int64_t d = parse_int(text.substr(slash + 1));
  if (d <= 0) throw std::invalid_argument("rational literal '" + std::string(text) +
                                          "' needs a positive denominator");
  return Time(n, d);
}

std::int64_t Time::floor() const { return floor_of(num_, den_); }

std::int64_t Time::ceil() const { return -floor_of(-static_cast<wide>(num_), den_); }

std::string Time::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Time Time::operator-() const { return make(-static_cast<wide>(num_), den_); }

Time& Time::operator+=(const Time& rhs) {
  if (den_ == rhs.den_) {
    *this = make(static_cast<wide>(num_) + rhs.num_, den_);
  } else {
    *this = make(static_cast<wide>(num_) * rhs.den_ + static_cast<wide>(rhs.num_) * den_,
                 static_cast<wide>(den_) * rhs.den_);
  }
  return *this;
}

Time& Time::operator-=(const Time& rhs) { return *this += -rhs; }

Time& Time::operator*=(const Time& rhs) {
  *this = make(static_cast<wide>(num_) * rhs.num_, static_cast<wide>(den_) * rhs.den_);
  return *this;
}

Time& Time::operator/=(const Time& rhs) {
  if (rhs.num_ == 0) throw std::domain_error("Time: division by zero");
  *this = make(static_cast<wide>(num_) * rhs.den_, static_cast<wide>(den_) * rhs.num_);
  return *this;
}

std::strong_ordering operator<=>(const Time& lhs, const Time& rhs) {
  if (lhs.den_ == rhs.den_) return lhs.num_ <=> rhs.num_;
  wide l = static_cast<wide>(lhs.num_) * rhs.den_;
  wide r = static_cast<wide>(rhs.num_) * lhs.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Time& t) { return os << t.str(); }

std::int64_t floor_div(const Time& a, const Time& b) {
  if (b.num() == 0) throw std::domain_error("floor_div: division by zero");
  return floor_of(static_cast<wide>(a.num()) * b.den(), static_cast<wide>(a.den()) * b.num());
}

std::int64_t ceil_div(const Time& a, const Time& b) {
  if (b.num() == 0) throw std::domain_error("ceil_div: division by zero");
  return -floor_of(-static_cast<wide>(a.num()) * b.den(), static_cast<wide>(a.den()) * b.num());
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  if (a <= 0 || b <= 0) throw std::invalid_argument("checked_lcm: positive arguments required");
  std::int64_t g = std::gcd(a, b);
  return narrow(static_cast<wide>(a / g) * b);
}

}  // namespace ssrta
