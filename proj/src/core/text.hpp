#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdc {

/// Shortest decimal form of `value` that round-trips back to the same double.
std::string format_number(double value);

/// Strict full-string parse of a finite decimal or scientific number.
/// Returns nullopt on trailing garbage, infinities and NaN.
std::optional<double> parse_number(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

std::string_view trim(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

} // namespace sdc
