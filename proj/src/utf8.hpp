#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// Minimal UTF-8 helpers. Non-ASCII bytes count as letters; case is known for
// ASCII and the Latin-1 supplement (German umlauts).
namespace bootlex::utf8 {

inline bool is_letter_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

inline std::size_t sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 1;
}

inline bool starts_upper(std::string_view s) {
  if (s.empty()) return false;
  auto c = static_cast<unsigned char>(s[0]);
  if (c >= 'A' && c <= 'Z') return true;
  if (c == 0xC3 && s.size() > 1) {
    auto d = static_cast<unsigned char>(s[1]);
    return d >= 0x80 && d <= 0x9E && d != 0x97;
  }
  return false;
}

inline bool starts_lower(std::string_view s) {
  if (s.empty()) return false;
  auto c = static_cast<unsigned char>(s[0]);
  if (c >= 'a' && c <= 'z') return true;
  if (c == 0xC3 && s.size() > 1) {
    auto d = static_cast<unsigned char>(s[1]);
    return d >= 0x9F && d <= 0xBF && d != 0xB7;
  }
  return false;
}

inline std::string lower_first(std::string_view s) {
  std::string out(s);
  if (out.empty()) return out;
  auto c = static_cast<unsigned char>(out[0]);
  if (c >= 'A' && c <= 'Z') {
    out[0] = static_cast<char>(c - 'A' + 'a');
  } else if (c == 0xC3 && out.size() > 1 && starts_upper(out)) {
    out[1] = static_cast<char>(static_cast<unsigned char>(out[1]) + 0x20);
  }
  return out;
}

inline std::string upper_first(std::string_view s) {
  std::string out(s);
  if (out.empty()) return out;
  auto c = static_cast<unsigned char>(out[0]);
  if (c >= 'a' && c <= 'z') {
    out[0] = static_cast<char>(c - 'a' + 'A');
  } else if (c == 0xC3 && out.size() > 1 && starts_lower(out) &&
             static_cast<unsigned char>(out[1]) != 0x9F) {
    out[1] = static_cast<char>(static_cast<unsigned char>(out[1]) - 0x20);
  }
  return out;
}

}  // namespace bootlex::utf8
