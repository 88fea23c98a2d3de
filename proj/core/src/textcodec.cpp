#include "textcodec.hpp"

#include <sstream>

namespace rcms::textcodec {

std::string escape_value(std::string_view v) {
  std::string out;
  out.reserve(v.size());
  for (char c : v) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::optional<std::string> unescape_value(std::string_view v) {
  std::string out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != '\\') {
      out.push_back(v[i]);
      continue;
    }
    if (i + 1 >= v.size()) return std::nullopt;
    ++i;
    switch (v[i]) {
      case '\\':
        out.push_back('\\');
        break;
      case 'n':
        out.push_back('\n');
        break;
      case 'r':
        out.push_back('\r');
        break;
      default:
        return std::nullopt;
    }
  }
  return out;
}

std::string build_kv_block(const std::map<std::string, std::string>& fields) {
  std::string out;
  for (const auto& [k, v] : fields) {
    out += k;
    out.push_back('=');
    out += escape_value(v);
    out.push_back('\n');
  }
  return out;
}

std::optional<std::map<std::string, std::string>> parse_kv_block(std::string_view text) {
  std::map<std::string, std::string> fields;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) return std::nullopt;
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) return std::nullopt;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) return std::nullopt;
    std::string key(line.substr(0, eq));
    auto value = unescape_value(line.substr(eq + 1));
    if (!value) return std::nullopt;
    if (!fields.emplace(std::move(key), std::move(*value)).second) return std::nullopt;
  }
  return fields;
}

namespace {
std::string begin_marker(std::string_view label) {
  std::string s = "----BEGIN ";
  s += label;
  s += "----";
  return s;
}
std::string end_marker(std::string_view label) {
  std::string s = "----END ";
  s += label;
  s += "----";
  return s;
}
}  // namespace

std::string wrap_marker_block(std::string_view label, std::string_view body) {
  std::string out = begin_marker(label);
  out.push_back('\n');
  out += body;
  if (!body.empty() && body.back() != '\n') out.push_back('\n');
  out += end_marker(label);
  out.push_back('\n');
  return out;
}

std::optional<std::vector<std::string>> split_marker_blocks(std::string_view label,
                                                            std::string_view text) {
  const std::string begin = begin_marker(label);
  const std::string end = end_marker(label);
  std::vector<std::string> blocks;
  bool inside = false;
  std::string body;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line;
    if (eol == std::string_view::npos) {
      line = text.substr(pos);
      pos = text.size() + 1;
    } else {
      line = text.substr(pos, eol - pos);
      pos = eol + 1;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!inside) {
      if (line == begin) {
        inside = true;
        body.clear();
      } else if (!line.empty()) {
        return std::nullopt;
      }
    } else {
      if (line == end) {
        inside = false;
        blocks.push_back(body);
      } else {
        body += line;
        body.push_back('\n');
      }
    }
    if (eol == std::string_view::npos) break;
  }
  if (inside) return std::nullopt;
  return blocks;
}

}  // namespace rcms::textcodec
