#include "dmnprompt/decimal.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>
#include <system_error>

namespace dmnprompt {

namespace {

constexpr int128_t pow10(int n) {
  int128_t v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

constexpr int128_t kOne = pow10(Decimal::kScale);
// |value| must stay below 10^20 so that unit counts fit comfortably in 128 bits.
constexpr int128_t kLimit = pow10(Decimal::kScale + 20);

bool is_digit(char c) { return c >= '0' && c <= '9'; }

int128_t checked(int128_t v) {
  if (v >= kLimit || v <= -kLimit) throw std::out_of_range("decimal out of range");
  return v;
}

}  // namespace

Decimal::Decimal(std::int64_t integer) : units_(checked(static_cast<int128_t>(integer) * kOne)) {}

Decimal Decimal::parse(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }

  int128_t integer = 0;
  std::size_t int_digits = 0;
  std::size_t group = 0;
  bool grouped = false;
  while (i < text.size()) {
    char c = text[i];
    if (is_digit(c)) {
      integer = integer * 10 + (c - '0');
      ++int_digits;
      ++group;
      if (int_digits > 20) throw std::out_of_range("decimal out of range: " + std::string(text));
      ++i;
    } else if (c == ',') {
      // thousands separator: previous group 1-3 digits (or exactly 3 once grouped)
      if (group == 0 || group > 3 || (grouped && group != 3)) {
        throw std::invalid_argument("misplaced thousands separator in '" + std::string(text) + "'");
      }
      grouped = true;
      group = 0;
      ++i;
    } else {
      break;
    }
  }
  if (grouped && group != 3) {
    throw std::invalid_argument("misplaced thousands separator in '" + std::string(text) + "'");
  }

  int128_t fraction = 0;
  std::size_t frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && is_digit(text[i])) {
      if (frac_digits == static_cast<std::size_t>(kScale)) {
        throw std::out_of_range("more than 18 fractional digits in '" + std::string(text) + "'");
      }
      fraction = fraction * 10 + (text[i] - '0');
      ++frac_digits;
      ++i;
    }
  }
  if (int_digits == 0 && frac_digits == 0) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  if (i != text.size()) {
    throw std::invalid_argument("trailing characters in number '" + std::string(text) + "'");
  }

  int128_t units = checked(integer * kOne + fraction * pow10(kScale - static_cast<int>(frac_digits)));
  return from_units(negative ? -units : units);
}

std::optional<Decimal> Decimal::try_parse(std::string_view text) noexcept {
  try {
    return parse(text);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Decimal Decimal::from_double(double value) {
  if (value != value || value == std::numeric_limits<double>::infinity() ||
      value == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("non-finite number");
  }
  char buf[512];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  if (ec != std::errc()) throw std::out_of_range("number too large");
  return parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

bool Decimal::is_integer() const noexcept { return units_ % kOne == 0; }

double Decimal::to_double() const noexcept {
  int128_t ip = units_ / kOne;
  int128_t fp = units_ % kOne;
  return static_cast<double>(ip) + static_cast<double>(fp) / static_cast<double>(kOne);
}

std::string Decimal::to_string() const {
  int128_t v = units_;
  bool negative = v < 0;
  if (negative) v = -v;
  int128_t ip = v / kOne;
  int128_t fp = v % kOne;

  std::string int_part;
  do {
    int_part.insert(int_part.begin(), static_cast<char>('0' + static_cast<int>(ip % 10)));
    ip /= 10;
  } while (ip != 0);

  std::string out = negative ? "-" + int_part : int_part;
  if (fp != 0) {
    std::string frac(kScale, '0');
    for (int i = kScale - 1; i >= 0; --i) {
      frac[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(fp % 10));
      fp /= 10;
    }
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    out += '.';
    out += frac;
  }
  return out;
}

Decimal Decimal::operator+(const Decimal& other) const { return from_units(checked(units_ + other.units_)); }

Decimal Decimal::operator-(const Decimal& other) const { return from_units(checked(units_ - other.units_)); }

Decimal Decimal::operator-() const { return from_units(-units_); }

}  // namespace dmnprompt
