#pragma once

// Minimal delimited-text helpers shared by the file readers.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tailnorm::csv {

/// Splits on commas, trims whitespace and strips one layer of double quotes.
std::vector<std::string> split(std::string_view line);

std::optional<double> to_double(std::string_view text);
std::optional<std::size_t> to_size(std::string_view text);

/// Index of `name` in a header row, case-insensitive.
std::optional<std::size_t> column(const std::vector<std::string>& header, std::string_view name);

}  // namespace tailnorm::csv
