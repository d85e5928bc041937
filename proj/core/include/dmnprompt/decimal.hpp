#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dmnprompt {

__extension__ typedef __int128 int128_t;

/// Exact fixed-point decimal: a 128-bit integer count of 10^-18 units.
///
/// Decision-table boundaries ("> 50000", ">= 700") must compare exactly, so
/// numbers coming from DMN cells, evaluation contexts and JSON are never
/// routed through binary floating point.
class Decimal {
 public:
  static constexpr int kScale = 18;

  constexpr Decimal() = default;
  Decimal(std::int64_t integer);  // NOLINT(google-explicit-constructor)

  /// Parses "-12.5", "50000", "50,000", ".25". Thousands separators must be
  /// well-grouped (1-3 leading digits, then groups of exactly three).
  /// Throws std::invalid_argument on bad syntax and std::out_of_range when
  /// the value has more than 18 fractional digits or exceeds the range.
  static Decimal parse(std::string_view text);
  static std::optional<Decimal> try_parse(std::string_view text) noexcept;

  /// Shortest round-trip rendering of the double, then parsed exactly.
  static Decimal from_double(double value);

  /// Builds a decimal from a raw unit count (value = units * 10^-18).
  static Decimal from_units(int128_t units) noexcept {
    Decimal d;
    d.units_ = units;
    return d;
  }

  /// Smallest representable positive step.
  static Decimal epsilon() noexcept { return from_units(1); }

  [[nodiscard]] int128_t units() const noexcept { return units_; }
  [[nodiscard]] bool is_integer() const noexcept;
  [[nodiscard]] double to_double() const noexcept;

  /// Separator-free canonical text, trailing fractional zeros stripped.
  [[nodiscard]] std::string to_string() const;

  Decimal operator+(const Decimal& other) const;
  Decimal operator-(const Decimal& other) const;
  Decimal operator-() const;

  friend bool operator==(const Decimal&, const Decimal&) = default;
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
    return a.units_ <=> b.units_;
  }

 private:
  int128_t units_ = 0;
};

}  // namespace dmnprompt
