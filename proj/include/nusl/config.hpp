#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace nusl {

/// Scalar or array-of-scalar config value.
struct ConfigValue {
  using Scalar = std::variant<bool, std::int64_t, double, std::string>;
  Scalar scalar;
  std::vector<Scalar> array;
  bool is_array = false;

  bool as_bool() const;
  std::int64_t as_int() const;
  double as_double() const;
  const std::string& as_string() const;
  std::vector<std::int64_t> as_int_array() const;
  std::vector<std::string> as_string_array() const;
};

/// key = value pairs grouped into [table] sections. Top-level keys live in
/// the "" table. Strings are double-quoted, arrays bracketed, # comments.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& table, const std::string& key) const;
  const ConfigValue& get(const std::string& table, const std::string& key) const;
  const ConfigValue* find(const std::string& table, const std::string& key) const;

  void set(const std::string& table, const std::string& key, ConfigValue value);

  /// Canonical form: tables and keys sorted, normalized scalar rendering.
  /// Equal semantic content gives equal canonical text.
  std::string canonical() const;

  /// FNV-1a 64-bit hex digest of the canonical form.
  std::string hash() const;

 private:
  std::map<std::string, std::map<std::string, ConfigValue>> tables_;
};

}  // namespace nusl
