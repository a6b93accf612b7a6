#include "dff/text_norm.hpp"

#include <algorithm>
#include <array>

#include "dff/error.hpp"

namespace dff {

namespace {

constexpr std::array<std::string_view, 20> kUnits = {
    "",       "eins",     "zwei",     "drei",     "vier",      "fünf",     "sechs",
    "sieben", "acht",     "neun",     "zehn",     "elf",       "zwölf",    "dreizehn",
    "vierzehn", "fünfzehn", "sechzehn", "siebzehn", "achtzehn", "neunzehn"};

constexpr std::array<std::string_view, 10> kTens = {
    "", "", "zwanzig", "dreißig", "vierzig", "fünfzig", "sechzig", "siebzig", "achtzig", "neunzig"};

std::string unit_prefix(std::uint32_t u) { return u == 1 ? "ein" : std::string(kUnits[u]); }

std::string below_hundred(std::uint32_t n, bool standalone) {
  if (n == 1) return standalone ? "eins" : "ein";
  if (n < 20) return std::string(kUnits[n]);
  std::uint32_t unit = n % 10;
  std::string tens(kTens[n / 10]);
  if (unit == 0) return tens;
  return unit_prefix(unit) + "und" + tens;
}

std::string below_thousand(std::uint32_t n, bool standalone) {
  std::string out;
  if (n >= 100) out = unit_prefix(n / 100) + "hundert";
  if (n % 100 != 0) out += below_hundred(n % 100, standalone);
  return out;
}

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// ASCII and Ä/Ö/Ü lowering; preserves byte length so positions line up.
std::string fold_same_length(std::string_view s) {
  std::string out(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(out[i]);
    if (c >= 'A' && c <= 'Z') {
      out[i] = static_cast<char>(c + 32);
    } else if (c == 0xC3 && i + 1 < out.size()) {
      unsigned char d = static_cast<unsigned char>(out[i + 1]);
      if (d == 0x84 || d == 0x96 || d == 0x9C) out[i + 1] = static_cast<char>(d + 0x20);
      ++i;
    }
  }
  return out;
}

std::string apply_lexicon(std::string_view text, const Lexicon& lexicon) {
  if (lexicon.empty()) return std::string(text);
  struct Key {
    std::string folded;
    const std::string* replacement;
  };
  std::vector<Key> keys;
  for (const auto& [from, to] : lexicon) {
    if (!from.empty()) keys.push_back({fold_same_length(from), &to});
  }
  // Longest key wins; ties keep map order.
  std::stable_sort(keys.begin(), keys.end(),
                   [](const Key& a, const Key& b) { return a.folded.size() > b.folded.size(); });

  const std::string folded = fold_same_length(text);
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    bool at_word_start = i == 0 || !is_word_byte(static_cast<unsigned char>(text[i - 1]));
    bool matched = false;
    if (at_word_start) {
      for (const Key& k : keys) {
        if (folded.compare(i, k.folded.size(), k.folded) != 0) continue;
        std::size_t end = i + k.folded.size();
        if (end < text.size() && is_word_byte(static_cast<unsigned char>(text[end])) &&
            is_word_byte(static_cast<unsigned char>(text[end - 1]))) {
          continue;
        }
        out += *k.replacement;
        i = end;
        matched = true;
        break;
      }
    }
    if (!matched) out += text[i++];
  }
  return out;
}

std::string expand_numbers(std::string_view text, std::vector<std::string>* warnings) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_digit(text[i])) {
      out += text[i++];
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && is_digit(text[i])) ++i;
    bool grouped = false;
    while (i + 1 < text.size() && (text[i] == '.' || text[i] == ',') && is_digit(text[i + 1])) {
      grouped = true;
      ++i;
      while (i < text.size() && is_digit(text[i])) ++i;
    }
    std::string_view token = text.substr(start, i - start);
    if (grouped) {
      if (warnings) warnings->push_back("deleted non-integer number '" + std::string(token) + "'");
      continue;
    }
    std::size_t nz = token.find_first_not_of('0');
    std::string_view significant = nz == std::string_view::npos ? std::string_view("0") : token.substr(nz);
    if (significant.size() > 6) {
      throw Error(Errc::NumberOutOfRange, "number '" + std::string(token) + "' exceeds " +
                                              std::to_string(kMaxCardinal));
    }
    std::uint32_t value = 0;
    for (char c : significant) value = value * 10 + static_cast<std::uint32_t>(c - '0');

    bool letter_before = start > 0 && is_word_byte(static_cast<unsigned char>(text[start - 1]));
    bool letter_after = i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]));
    if (letter_before) out += ' ';
    out += german_cardinal(value);
    if (letter_after) out += ' ';
  }
  return out;
}

// Decodes one code point; returns 0xFFFFFFFF for malformed input and
// advances by one byte in that case.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    unsigned char b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (c < 0x80) {
    ++i;
    return c;
  }
  int len = (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xF8) == 0xF0 ? 4 : 0;
  if (len == 0) {
    ++i;
    return 0xFFFFFFFF;
  }
  char32_t cp = c & (0x7F >> len);
  for (int k = 1; k < len; ++k) {
    int b = cont(static_cast<std::size_t>(k));
    if (b < 0) {
      ++i;
      return 0xFFFFFFFF;
    }
    cp = (cp << 6) | static_cast<char32_t>(b);
  }
  i += static_cast<std::size_t>(len);
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  switch (cp) {
    case U'Ä': return U'ä';
    case U'Ö': return U'ö';
    case U'Ü': return U'ü';
    case U'ẞ': return U'ß';
    default: return cp;
  }
}

bool is_space(char32_t cp) { return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == 0xA0; }

}  // namespace

std::string german_cardinal(std::uint32_t value) {
  if (value > kMaxCardinal) {
    throw Error(Errc::NumberOutOfRange, std::to_string(value) + " exceeds " + std::to_string(kMaxCardinal));
  }
  if (value == 0) return "null";
  std::string out;
  if (value >= 1000) out = below_thousand(value / 1000, false) + "tausend";
  if (value % 1000 != 0) out += below_thousand(value % 1000, true);
  return out;
}

bool in_charset(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return true;
  switch (cp) {
    case U'ä': case U'ö': case U'ü': case U'ß':
    case U' ': case U'.': case U',': case U'!': case U'?':
    case U';': case U':': case U'-': case U'\'':
      return true;
    default:
      return false;
  }
}

bool is_charset_clean(std::string_view utf8) {
  std::size_t i = 0;
  while (i < utf8.size()) {
    if (!in_charset(next_code_point(utf8, i))) return false;
  }
  return true;
}

std::string normalize_text(std::string_view text, const Lexicon& lexicon, std::vector<std::string>* warnings) {
  std::string expanded = expand_numbers(apply_lexicon(text, lexicon), warnings);

  std::string out;
  out.reserve(expanded.size());
  bool pending_space = false;
  std::size_t i = 0;
  while (i < expanded.size()) {
    char32_t cp = next_code_point(expanded, i);
    if (is_space(cp)) {
      pending_space = true;
      continue;
    }
    cp = to_lower(cp);
    if (!in_charset(cp)) continue;
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    append_utf8(out, cp);
  }
  return out;
}

}  // namespace dff
