#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace axon {

/// Physical dimension as exponents of (length, time, amount).
struct Dimension {
  int length = 0;
  int time = 0;
  int amount = 0;
  friend bool operator==(const Dimension&, const Dimension&) = default;
};

/// Parses a unit expression such as "um", "min", "um2/s" or "mol/m3" into
/// its SI scale factor and dimension. Throws ConfigError on unknown units.
struct Unit {
  double scale = 1.0;
  Dimension dim;
};
[[nodiscard]] Unit parse_unit(std::string_view text);

/// Key/value document with [sections], '#' comments, numbers with optional
/// unit suffix ("12 um", "0.5 s"), quoted strings, booleans and numeric
/// arrays. Every accessor records the key as used so that leftovers can be
/// reported as unknown.
class ConfigDocument {
 public:
  struct Entry {
    std::variant<double, bool, std::string, std::vector<double>> value;
    std::optional<Unit> unit;  ///< present when a suffix was given
    int line = 0;
  };

  static ConfigDocument parse(std::string_view text, std::string source = "<config>");
  static ConfigDocument load(const std::string& path);

  [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) != 0; }
  /// Number converted to SI; a bare number is taken as SI already. A unit
  /// with the wrong dimension is an error.
  [[nodiscard]] std::optional<double> number(const std::string& key, Dimension dim) const;
  [[nodiscard]] std::optional<bool> boolean(const std::string& key) const;
  [[nodiscard]] std::optional<std::string> string(const std::string& key) const;
  [[nodiscard]] std::optional<std::vector<double>> array(const std::string& key, std::size_t size) const;

  /// Throws ConfigError naming the first key no accessor asked for.
  void reject_unknown() const;
  /// ConfigError prefixed with "source:line: key 'k':".
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;
  [[nodiscard]] const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
  mutable std::map<std::string, bool> used_;
};

namespace dims {
inline constexpr Dimension none{};
inline constexpr Dimension length{1, 0, 0};
inline constexpr Dimension time{0, 1, 0};
inline constexpr Dimension rate{0, -1, 0};
inline constexpr Dimension inv_length{-1, 0, 0};
inline constexpr Dimension speed{1, -1, 0};
inline constexpr Dimension diffusivity{2, -1, 0};
inline constexpr Dimension concentration{-3, 0, 1};
inline constexpr Dimension growth{4, -1, -1};
}  // namespace dims

}  // namespace axon
