#include "axon/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "axon/errors.hpp"

namespace axon {

namespace {

struct BaseUnit {
  std::string_view name;
  double scale;
  Dimension dim;
};

constexpr BaseUnit kUnits[] = {
    {"m", 1.0, dims::length},      {"mm", 1e-3, dims::length},   {"um", 1e-6, dims::length},
    {"nm", 1e-9, dims::length},    {"s", 1.0, dims::time},       {"ms", 1e-3, dims::time},
    {"min", 60.0, dims::time},     {"h", 3600.0, dims::time},    {"mol", 1.0, {0, 0, 1}},
    {"mmol", 1e-3, {0, 0, 1}},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// "um2" -> (um, 2)
void apply_factor(std::string_view tok, int sign, Unit& u) {
  std::size_t k = tok.size();
  while (k > 0 && std::isdigit(static_cast<unsigned char>(tok[k - 1]))) --k;
  int power = 1;
  if (k < tok.size()) power = std::stoi(std::string(tok.substr(k)));
  std::string_view base = tok.substr(0, k);
  if (!base.empty() && base.back() == '^') base.remove_suffix(1);
  for (const auto& b : kUnits) {
    if (b.name == base) {
      u.scale *= std::pow(b.scale, sign * power);
      u.dim.length += sign * power * b.dim.length;
      u.dim.time += sign * power * b.dim.time;
      u.dim.amount += sign * power * b.dim.amount;
      return;
    }
  }
  throw ConfigError(fmt::format("unknown unit '{}'", tok));
}

std::string describe(Dimension d) {
  return fmt::format("m^{} s^{} mol^{}", d.length, d.time, d.amount);
}

double parse_number(std::string_view s, std::size_t& used) {
  const std::string str(s);
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  used = static_cast<std::size_t>(end - str.c_str());
  return v;
}

}  // namespace

Unit parse_unit(std::string_view text) {
  Unit u;
  text = trim(text);
  if (text.empty()) throw ConfigError("empty unit");
  int sign = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find_first_of("/*", pos);
    const auto tok = trim(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    // "/s" and "1/s" both read as per second
    const bool leading_slash = tok.empty() && pos == 0 && next == 0;
    if (tok.empty() && !leading_slash) throw ConfigError(fmt::format("malformed unit '{}'", text));
    if (!leading_slash && tok != "1") apply_factor(tok, sign, u);
    if (next == std::string_view::npos) break;
    sign = text[next] == '/' ? -1 : 1;
    pos = next + 1;
  }
  return u;
}

ConfigDocument ConfigDocument::parse(std::string_view text, std::string source) {
  ConfigDocument doc;
  doc.source_ = std::move(source);
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    auto err = [&](const std::string& msg) {
      return ConfigError(fmt::format("{}:{}: {}", doc.source_, line_no, msg));
    };

    // strip comments outside quotes
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw err("unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw err("empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw err(fmt::format("expected 'key = value', got '{}'", line));
    const auto key_part = trim(line.substr(0, eq));
    auto val = trim(line.substr(eq + 1));
    if (key_part.empty()) throw err("missing key");
    if (val.empty()) throw err(fmt::format("key '{}' has no value", key_part));
    const std::string key = section.empty() ? std::string(key_part) : section + "." + std::string(key_part);
    if (doc.entries_.count(key)) throw err(fmt::format("duplicate key '{}'", key));

    Entry e;
    e.line = line_no;
    if (val.front() == '"') {
      if (val.size() < 2 || val.back() != '"') throw err(fmt::format("key '{}': unterminated string", key));
      e.value = std::string(val.substr(1, val.size() - 2));
    } else if (val == "true" || val == "false") {
      e.value = (val == "true");
    } else if (val.front() == '[') {
      if (val.back() != ']') throw err(fmt::format("key '{}': unterminated array", key));
      std::vector<double> items;
      auto body = val.substr(1, val.size() - 2);
      std::size_t p = 0;
      while (p < body.size()) {
        const auto comma = body.find(',', p);
        const auto item = trim(body.substr(p, comma == std::string_view::npos ? std::string_view::npos : comma - p));
        std::size_t used = 0;
        const double v = parse_number(item, used);
        if (item.empty() || used != item.size()) throw err(fmt::format("key '{}': bad array element '{}'", key, item));
        items.push_back(v);
        if (comma == std::string_view::npos) break;
        p = comma + 1;
      }
      e.value = std::move(items);
    } else {
      std::size_t used = 0;
      const double v = parse_number(val, used);
      if (used == 0) throw err(fmt::format("key '{}': cannot parse '{}' as a number", key, val));
      if (!std::isfinite(v)) throw err(fmt::format("key '{}': value is not finite", key));
      const auto rest = trim(val.substr(used));
      if (!rest.empty()) {
        try {
          e.unit = parse_unit(rest);
        } catch (const ConfigError& ex) {
          throw err(fmt::format("key '{}': {}", key, ex.what()));
        }
      }
      e.value = v;
    }
    doc.entries_.emplace(key, std::move(e));
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void ConfigDocument::fail(const std::string& key, const std::string& msg) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(fmt::format("{}: key '{}': {}", source_, key, msg));
  throw ConfigError(fmt::format("{}:{}: key '{}': {}", source_, it->second.line, key, msg));
}

std::optional<double> ConfigDocument::number(const std::string& key, Dimension dim) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  used_[key] = true;
  const auto* v = std::get_if<double>(&it->second.value);
  if (v == nullptr) fail(key, "expected a number");
  if (!it->second.unit) return *v;
  if (!(it->second.unit->dim == dim)) {
    fail(key, fmt::format("unit has dimension {}, expected {}", describe(it->second.unit->dim), describe(dim)));
  }
  return *v * it->second.unit->scale;
}

std::optional<bool> ConfigDocument::boolean(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  used_[key] = true;
  const auto* v = std::get_if<bool>(&it->second.value);
  if (v == nullptr) fail(key, "expected true or false");
  return *v;
}

std::optional<std::string> ConfigDocument::string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  used_[key] = true;
  const auto* v = std::get_if<std::string>(&it->second.value);
  if (v == nullptr) fail(key, "expected a quoted string");
  return *v;
}

std::optional<std::vector<double>> ConfigDocument::array(const std::string& key, std::size_t size) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  used_[key] = true;
  const auto* v = std::get_if<std::vector<double>>(&it->second.value);
  if (v == nullptr) fail(key, "expected an array");
  if (v->size() != size) fail(key, fmt::format("expected {} elements, got {}", size, v->size()));
  return *v;
}

void ConfigDocument::reject_unknown() const {
  for (const auto& [key, e] : entries_) {
    if (!used_.count(key)) throw ConfigError(fmt::format("{}:{}: unknown key '{}'", source_, e.line, key));
  }
}

}  // namespace axon
