#include "glvortex/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "glvortex/errors.hpp"

namespace glvortex {

namespace {

using nlohmann::json;

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(Errc::Config, "line " + std::to_string(line) + ": " + msg);
}

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  int line;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size() || s[i] == '#';
  }
};

bool bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_key(Cursor& c) {
  c.skip_ws();
  std::string key;
  while (c.i < c.s.size() && bare_key_char(c.s[c.i])) key += c.s[c.i++];
  if (key.empty()) fail(c.line, "expected a key");
  return key;
}

std::string parse_string(Cursor& c) {
  ++c.i;  // opening quote
  std::string out;
  while (c.i < c.s.size() && c.s[c.i] != '"') {
    char ch = c.s[c.i++];
    if (ch == '\\') {
      if (c.i >= c.s.size()) break;
      const char e = c.s[c.i++];
      switch (e) {
        case 'n': ch = '\n'; break;
        case 't': ch = '\t'; break;
        case '"': ch = '"'; break;
        case '\\': ch = '\\'; break;
        default: fail(c.line, std::string("unknown escape \\") + e);
      }
    }
    out += ch;
  }
  if (c.i >= c.s.size()) fail(c.line, "unterminated string");
  ++c.i;
  return out;
}

std::string parse_literal(Cursor& c) {
  const std::size_t close = c.s.find('\'', c.i + 1);
  if (close == std::string::npos) fail(c.line, "unterminated string");
  std::string out = c.s.substr(c.i + 1, close - c.i - 1);
  c.i = close + 1;
  return out;
}

json parse_value(Cursor& c);

json parse_array(Cursor& c) {
  ++c.i;
  json arr = json::array();
  for (;;) {
    c.skip_ws();
    if (c.i >= c.s.size()) fail(c.line, "unterminated array");
    if (c.s[c.i] == ']') {
      ++c.i;
      return arr;
    }
    arr.push_back(parse_value(c));
    c.skip_ws();
    if (c.i < c.s.size() && c.s[c.i] == ',') {
      ++c.i;
    } else if (c.i < c.s.size() && c.s[c.i] != ']') {
      fail(c.line, "expected ',' or ']' in array");
    }
  }
}

json parse_value(Cursor& c) {
  c.skip_ws();
  if (c.i >= c.s.size()) fail(c.line, "missing value");
  const char ch = c.s[c.i];
  if (ch == '"') return parse_string(c);
  if (ch == '\'') return parse_literal(c);
  if (ch == '[') return parse_array(c);
  std::size_t j = c.i;
  while (j < c.s.size() && c.s[j] != ',' && c.s[j] != ']' && c.s[j] != '#' && c.s[j] != ' ' &&
         c.s[j] != '\t') {
    ++j;
  }
  std::string tok = c.s.substr(c.i, j - c.i);
  c.i = j;
  if (tok == "true") return true;
  if (tok == "false") return false;
  std::string num;
  for (char d : tok) {
    if (d != '_') num += d;
  }
  if (num == "inf" || num == "+inf") return std::numeric_limits<double>::infinity();
  if (num == "-inf") return -std::numeric_limits<double>::infinity();
  const bool is_float = num.find_first_of(".eE") != std::string::npos;
  try {
    std::size_t used = 0;
    if (is_float) {
      const double v = std::stod(num, &used);
      if (used == num.size()) return v;
    } else {
      const long long v = std::stoll(num, &used, 10);
      if (used == num.size()) return v;
    }
  } catch (const std::exception&) {
  }
  fail(c.line, "cannot parse value '" + tok + "'");
}

std::string format_number(const json& v) {
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  const double d = v.get<double>();
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string format_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string format_value(const json& v) {
  if (v.is_string()) return format_string(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return format_number(v);
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ", ";
      out += format_value(v[i]);
    }
    return out + "]";
  }
  throw Error(Errc::Config, "value cannot be written as TOML: " + v.dump());
}

void dump_table(const json& obj, const std::string& prefix, std::string& out) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (it->is_object() || it->is_null()) continue;
    out += it.key() + " = " + format_value(*it) + "\n";
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!it->is_object()) continue;
    const std::string name = prefix.empty() ? it.key() : prefix + "." + it.key();
    out += "\n[" + name + "]\n";
    dump_table(*it, name, out);
  }
}

}  // namespace

json parse_toml(const std::string& text) {
  json root = json::object();
  json* table = &root;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::string pending;
  int pending_line = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    // Arrays may span lines: join until brackets balance outside strings.
    if (!pending.empty()) {
      pending += " " + raw;
    } else {
      pending = raw;
      pending_line = line_no;
    }
    int depth = 0;
    char quote = 0;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      const char ch = pending[k];
      if (quote) {
        if (ch == '\\' && quote == '"') {
          ++k;
        } else if (ch == quote) {
          quote = 0;
        }
      } else if (ch == '"' || ch == '\'') {
        quote = ch;
      } else if (ch == '#') {
        break;
      } else if (ch == '[') {
        ++depth;
      } else if (ch == ']') {
        --depth;
      }
    }
    Cursor c{pending, 0, pending_line};
    c.skip_ws();
    const bool header = c.i < pending.size() && pending[c.i] == '[';
    if (!header && depth > 0) continue;
    std::string line = pending;
    pending.clear();
    Cursor cur{line, 0, pending_line};
    if (cur.done()) continue;
    if (line[cur.i] == '[') {
      ++cur.i;
      table = &root;
      for (;;) {
        const std::string key = parse_key(cur);
        json& next = (*table)[key];
        if (next.is_null()) next = json::object();
        if (!next.is_object()) fail(cur.line, "table name clashes with a key: " + key);
        table = &next;
        cur.skip_ws();
        if (cur.i < line.size() && line[cur.i] == '.') {
          ++cur.i;
          continue;
        }
        break;
      }
      if (cur.i >= line.size() || line[cur.i] != ']') fail(cur.line, "expected ']'");
      ++cur.i;
      if (!cur.done()) fail(cur.line, "trailing characters after table header");
      continue;
    }
    const std::string key = parse_key(cur);
    cur.skip_ws();
    if (cur.i >= line.size() || line[cur.i] != '=') fail(cur.line, "expected '=' after key");
    ++cur.i;
    json value = parse_value(cur);
    if (!cur.done()) fail(cur.line, "trailing characters after value");
    if (table->contains(key)) fail(cur.line, "duplicate key: " + key);
    (*table)[key] = std::move(value);
  }
  if (!pending.empty()) fail(pending_line, "unterminated array");
  return root;
}

std::string dump_toml(const json& doc) {
  if (!doc.is_object()) throw Error(Errc::Config, "TOML documents must be objects");
  std::string out;
  dump_table(doc, "", out);
  return out;
}

json parse_config_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      throw Error(Errc::Config, std::string("invalid JSON: ") + e.what());
    }
  }
  return parse_toml(text);
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Config, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace glvortex
