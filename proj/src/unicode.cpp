#include "kath/unicode.hpp"

namespace kath::utf8 {

std::optional<char32_t> decode(std::string_view text, std::size_t& pos) {
  if (pos >= text.size()) return std::nullopt;
  const auto b0 = static_cast<unsigned char>(text[pos]);
  std::size_t len = 0;
  char32_t cp = 0;
  if (b0 < 0x80) {
    ++pos;
    return b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return std::nullopt;
  }
  if (pos + len > text.size()) return std::nullopt;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(text[pos + k]);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong forms, surrogates and out-of-range values.
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return std::nullopt;
  }
  pos += len;
  return cp;
}

bool is_valid(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (!decode(text, pos)) return false;
  }
  return true;
}

std::vector<char32_t> code_points(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto cp = decode(text, pos);
    if (!cp) {
      // Caller is expected to have validated; map stray bytes to U+FFFD.
      out.push_back(0xFFFD);
      ++pos;
      continue;
    }
    out.push_back(*cp);
  }
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size() * 2);
  for (char32_t cp : cps) append(out, cp);
  return out;
}

std::optional<char32_t> first(std::string_view text) {
  std::size_t pos = 0;
  return decode(text, pos);
}

std::size_t last_width(std::string_view text) {
  if (text.empty()) return 0;
  std::size_t start = text.size() - 1;
  while (start > 0 && (static_cast<unsigned char>(text[start]) & 0xC0) == 0x80 &&
         text.size() - start < 4) {
    --start;
  }
  return text.size() - start;
}

std::optional<char32_t> last(std::string_view text) {
  const std::size_t width = last_width(text);
  if (width == 0) return std::nullopt;
  std::size_t pos = text.size() - width;
  return decode(text, pos);
}

namespace {

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

// Spacing accents in the Greek Extended block.
bool is_greek_extended_accent(char32_t cp) {
  return cp == 0x1FBD || in(cp, 0x1FBF, 0x1FC1) || in(cp, 0x1FCD, 0x1FCF) ||
         in(cp, 0x1FDD, 0x1FDF) || in(cp, 0x1FED, 0x1FEF) ||
         in(cp, 0x1FFD, 0x1FFE);
}

}  // namespace

bool is_letter(char32_t cp) {
  if (in(cp, 'A', 'Z') || in(cp, 'a', 'z')) return true;
  if (cp < 0x80) return false;
  if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
  if (in(cp, 0xC0, 0x24F)) return cp != 0xD7 && cp != 0xF7;
  if (in(cp, 0x370, 0x3FF)) {
    return cp != 0x374 && cp != 0x375 && cp != 0x37E && cp != 0x384 &&
           cp != 0x385 && cp != 0x387 && cp != 0x3F6;
  }
  if (in(cp, 0x400, 0x4FF)) return !in(cp, 0x482, 0x489);
  if (in(cp, 0x1F00, 0x1FFF)) return !is_greek_extended_accent(cp);
  return false;
}

bool is_digit(char32_t cp) { return in(cp, '0', '9'); }

bool is_upper(char32_t cp) { return is_letter(cp) && to_lower(cp) != cp; }

bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return in(cp, 0x21, 0x2F) || in(cp, 0x3A, 0x40) || in(cp, 0x5B, 0x60) ||
           in(cp, 0x7B, 0x7E);
  }
  if (in(cp, 0xA1, 0xBF)) return !(cp == 0xAA || cp == 0xB5 || cp == 0xBA);
  return cp == 0x37E || cp == 0x387 || in(cp, 0x2010, 0x205E) ||
         in(cp, 0x3000, 0x303F);
}

char32_t to_lower(char32_t cp) {
  if (in(cp, 'A', 'Z')) return cp + 32;
  if (cp < 0xC0) return cp;
  if (in(cp, 0xC0, 0xDE) && cp != 0xD7) return cp + 32;
  if (in(cp, 0x100, 0x137) || in(cp, 0x14A, 0x177)) return cp | 1;
  if (in(cp, 0x139, 0x148) || in(cp, 0x179, 0x17E)) {
    return (cp & 1) ? cp + 1 : cp;
  }
  // Greek and Coptic.
  if (in(cp, 0x391, 0x3A9) && cp != 0x3A2) return cp + 32;
  if (cp == 0x386) return 0x3AC;
  if (in(cp, 0x388, 0x38A)) return cp + 37;
  if (cp == 0x38C) return 0x3CC;
  if (in(cp, 0x38E, 0x38F)) return cp + 63;
  // Cyrillic.
  if (in(cp, 0x410, 0x42F)) return cp + 32;
  if (in(cp, 0x400, 0x40F)) return cp + 80;
  // Greek Extended: capitals sit 8 above their lowercase forms.
  if (in(cp, 0x1F00, 0x1F6F) || in(cp, 0x1F80, 0x1FAF)) {
    const char32_t row = cp & 0xF;
    const bool upper_half = row >= 8;
    const bool present = !(in(cp, 0x1F18, 0x1F1F) && row >= 0xE) &&
                         !(in(cp, 0x1F48, 0x1F4F) && row >= 0xE) &&
                         !(in(cp, 0x1F58, 0x1F5F) && (row % 2 == 0));
    if (upper_half && present) return cp - 8;
    return cp;
  }
  switch (cp) {
    case 0x1FB8: return 0x1FB0;
    case 0x1FB9: return 0x1FB1;
    case 0x1FBA: return 0x1F70;
    case 0x1FBB: return 0x1F71;
    case 0x1FBC: return 0x1FB3;
    case 0x1FC8: return 0x1F72;
    case 0x1FC9: return 0x1F73;
    case 0x1FCA: return 0x1F74;
    case 0x1FCB: return 0x1F75;
    case 0x1FCC: return 0x1FC3;
    case 0x1FD8: return 0x1FD0;
    case 0x1FD9: return 0x1FD1;
    case 0x1FDA: return 0x1F76;
    case 0x1FDB: return 0x1F77;
    case 0x1FE8: return 0x1FE0;
    case 0x1FE9: return 0x1FE1;
    case 0x1FEA: return 0x1F7A;
    case 0x1FEB: return 0x1F7B;
    case 0x1FEC: return 0x1FE5;
    case 0x1FF8: return 0x1F78;
    case 0x1FF9: return 0x1F79;
    case 0x1FFA: return 0x1F7C;
    case 0x1FFB: return 0x1F7D;
    case 0x1FFC: return 0x1FF3;
    default: return cp;
  }
}

std::string lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : code_points(text)) append(out, to_lower(cp));
  return out;
}

}  // namespace kath::utf8
