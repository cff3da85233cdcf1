#include "nusl/config.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nusl {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

ConfigValue::Scalar parse_scalar(const std::string& raw) {
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
    return raw.substr(1, raw.size() - 2);
  if (raw == "true") return true;
  if (raw == "false") return false;
  try {
    std::size_t pos = 0;
    if (raw.find('.') == std::string::npos &&
        raw.find('e') == std::string::npos &&
        raw.find('E') == std::string::npos) {
      std::int64_t v = std::stoll(raw, &pos);
      if (pos == raw.size()) return v;
    }
    double v = std::stod(raw, &pos);
    if (pos == raw.size()) return v;
  } catch (const std::exception&) {
  }
  // Bare word: treat as string.
  return raw;
}

std::string render_scalar(const ConfigValue::Scalar& s) {
  struct Renderer {
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      return buf;
    }
    std::string operator()(const std::string& v) const { return '"' + v + '"'; }
  };
  return std::visit(Renderer{}, s);
}

}  // namespace

bool ConfigValue::as_bool() const {
  if (auto* b = std::get_if<bool>(&scalar)) return *b;
  throw std::runtime_error("config value is not a boolean");
}

std::int64_t ConfigValue::as_int() const {
  if (auto* v = std::get_if<std::int64_t>(&scalar)) return *v;
  if (auto* d = std::get_if<double>(&scalar)) return static_cast<std::int64_t>(*d);
  throw std::runtime_error("config value is not an integer");
}

double ConfigValue::as_double() const {
  if (auto* d = std::get_if<double>(&scalar)) return *d;
  if (auto* v = std::get_if<std::int64_t>(&scalar)) return static_cast<double>(*v);
  throw std::runtime_error("config value is not a number");
}

const std::string& ConfigValue::as_string() const {
  if (auto* s = std::get_if<std::string>(&scalar)) return *s;
  throw std::runtime_error("config value is not a string");
}

std::vector<std::int64_t> ConfigValue::as_int_array() const {
  if (!is_array) throw std::runtime_error("config value is not an array");
  std::vector<std::int64_t> out;
  for (const auto& s : array) {
    if (auto* v = std::get_if<std::int64_t>(&s))
      out.push_back(*v);
    else
      throw std::runtime_error("array element is not an integer");
  }
  return out;
}

std::vector<std::string> ConfigValue::as_string_array() const {
  if (!is_array) throw std::runtime_error("config value is not an array");
  std::vector<std::string> out;
  for (const auto& s : array) {
    if (auto* v = std::get_if<std::string>(&s))
      out.push_back(*v);
    else
      throw std::runtime_error("array element is not a string");
  }
  return out;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  std::string table;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) {
      // Keep # inside quoted strings.
      bool in_quote = false;
      std::size_t i = 0;
      for (; i < line.size(); ++i) {
        if (line[i] == '"') in_quote = !in_quote;
        if (line[i] == '#' && !in_quote) break;
      }
      line = line.substr(0, i);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("bad table header at line " +
                                 std::to_string(lineno));
      table = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("expected key = value at line " +
                               std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string raw = trim(line.substr(eq + 1));
    if (key.empty() || raw.empty())
      throw std::runtime_error("empty key or value at line " +
                               std::to_string(lineno));
    ConfigValue value;
    if (raw.front() == '[') {
      if (raw.back() != ']')
        throw std::runtime_error("unterminated array at line " +
                                 std::to_string(lineno));
      value.is_array = true;
      std::string inner = raw.substr(1, raw.size() - 2);
      std::string item;
      std::istringstream items(inner);
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (!item.empty()) value.array.push_back(parse_scalar(item));
      }
    } else {
      value.scalar = parse_scalar(raw);
    }
    cfg.tables_[table][key] = std::move(value);
  }
  return cfg;
}

bool ConfigFile::has(const std::string& table, const std::string& key) const {
  return find(table, key) != nullptr;
}

const ConfigValue* ConfigFile::find(const std::string& table,
                                    const std::string& key) const {
  auto t = tables_.find(table);
  if (t == tables_.end()) return nullptr;
  auto k = t->second.find(key);
  if (k == t->second.end()) return nullptr;
  return &k->second;
}

const ConfigValue& ConfigFile::get(const std::string& table,
                                   const std::string& key) const {
  const ConfigValue* v = find(table, key);
  if (!v)
    throw std::runtime_error("missing config key [" + table + "] " + key);
  return *v;
}

void ConfigFile::set(const std::string& table, const std::string& key,
                     ConfigValue value) {
  tables_[table][key] = std::move(value);
}

std::string ConfigFile::canonical() const {
  std::ostringstream out;
  for (const auto& [table, keys] : tables_) {  // std::map: already sorted
    for (const auto& [key, value] : keys) {
      out << '[' << table << "]." << key << '=';
      if (value.is_array) {
        out << '[';
        for (std::size_t i = 0; i < value.array.size(); ++i) {
          if (i) out << ',';
          out << render_scalar(value.array[i]);
        }
        out << ']';
      } else {
        out << render_scalar(value.scalar);
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string ConfigFile::hash() const {
  std::string text = canonical();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

}  // namespace nusl
