#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rcms::textcodec {

// Escapes backslash, newline and carriage return so any octet string fits
// on one "key=value" line and the encoding stays injective.
std::string escape_value(std::string_view v);
std::optional<std::string> unescape_value(std::string_view v);

// Lines "key=escaped(value)\n" in ascending key order.
std::string build_kv_block(const std::map<std::string, std::string>& fields);
std::optional<std::map<std::string, std::string>> parse_kv_block(std::string_view text);

std::string wrap_marker_block(std::string_view label, std::string_view body);

// Splits a file holding one or more "----BEGIN <label>----" blocks into the
// block bodies. Blank lines between blocks are fine; anything else is not.
std::optional<std::vector<std::string>> split_marker_blocks(std::string_view label,
                                                            std::string_view text);

}  // namespace rcms::textcodec
