#include "trainkit/text.hpp"

#include <charconv>
#include <system_error>

namespace trainkit {

std::string fmt_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fmt_double_fixed(double v) {
  char buf[768];  // fixed notation of tiny magnitudes can be long
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v,
                               std::chars_format::fixed);
  if (ec != std::errc()) return fmt_double(v);
  return std::string(buf, p);
}

std::string fmt_grouped(std::uint64_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  out.reserve(digits.size() + digits.size() / 3);
  std::size_t lead = digits.size() % 3 == 0 ? 3 : digits.size() % 3;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i == lead || (i > lead && (i - lead) % 3 == 0)) out.push_back('_');
    out.push_back(digits[i]);
  }
  return out;
}

std::string fmt_hms(std::uint64_t seconds) {
  std::uint64_t h = seconds / 3600;
  std::uint64_t m = (seconds % 3600) / 60;
  std::uint64_t s = seconds % 60;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02llu:%02llu:%02llu",
                static_cast<unsigned long long>(h),
                static_cast<unsigned long long>(m),
                static_cast<unsigned long long>(s));
  return buf;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::string clean;
  clean.reserve(s.size());
  for (char c : s) {
    if (c == '_') continue;  // digit grouping
    clean.push_back(c);
  }
  if (clean.empty()) return std::nullopt;
  std::uint64_t value = 0;
  auto [p, ec] = std::from_chars(clean.data(), clean.data() + clean.size(),
                                 value);
  if (ec != std::errc() || p != clean.data() + clean.size())
    return std::nullopt;
  return value;
}

std::optional<double> parse_f64(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double value = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> parse_hms(std::string_view s) {
  auto parts = split(s, ':');
  if (parts.size() != 3) return std::nullopt;
  auto h = parse_u64(parts[0]);
  auto m = parse_u64(parts[1]);
  auto sec = parse_u64(parts[2]);
  if (!h || !m || !sec || *m > 59 || *sec > 59) return std::nullopt;
  return *h * 3600 + *m * 60 + *sec;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace trainkit
