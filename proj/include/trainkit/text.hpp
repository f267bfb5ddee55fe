// Small formatting/parsing helpers shared by the renderer, CSV writers and
// file parsers. All double formatting goes through std::to_chars so output is
// deterministic and round-trips exactly.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trainkit {

// Shortest representation that parses back to exactly the same double.
std::string fmt_double(double v);

// Shortest *fixed-notation* representation (0.000025, not 2.5e-05). Used where
// the generated shell scripts keep plain decimal literals.
std::string fmt_double_fixed(double v);

// 244140 -> "244_140": underscore grouping as used for sample counts in the
// generated scripts.
std::string fmt_grouped(std::uint64_t v);

// Seconds -> "HH:MM:SS" (hours may exceed two digits).
std::string fmt_hms(std::uint64_t seconds);

// Strict parsers; return nullopt on any trailing garbage. parse_u64 accepts
// '_' digit grouping.
std::optional<std::uint64_t> parse_u64(std::string_view s);
std::optional<double> parse_f64(std::string_view s);
std::optional<std::uint64_t> parse_hms(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace trainkit
