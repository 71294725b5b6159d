#include "overlap/text.hpp"

#include <cstddef>

namespace overlap {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one UTF-8 sequence starting at i, advancing i past it. Malformed
// bytes decode to U+FFFD one byte at a time.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t j) { return static_cast<unsigned char>(s[j]); };
  unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return kReplacement;
  }
  if (i + len > s.size()) {
    ++i;
    return kReplacement;
  }
  for (int j = 1; j < len; ++j) {
    unsigned char b = byte(i + j);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return cp;
}

std::string_view single_letter(char c) {
  static constexpr char kLetters[] = "abcdefghijklmnopqrstuvwxyz";
  return std::string_view(&kLetters[c - 'a'], 1);
}

// ASCII base form of a Latin-1 Supplement or Latin Extended-A letter, or ""
// when the code point is not a letter we fold.
std::string_view fold_latin(char32_t cp) {
  // Latin-1 Supplement: letters only; 0xD7 (multiplication) and 0xF7
  // (division) fall through to non-letter handling.
  if (cp >= 0x00C0 && cp <= 0x00FF) {
    switch (cp) {
      case 0x00C6: case 0x00E6: return "ae";
      case 0x00D0: case 0x00F0: return "d";
      case 0x00DE: case 0x00FE: return "th";
      case 0x00DF: return "ss";
      case 0x00FF: return "y";  // shares a table row with the ss special
      case 0x00D7: case 0x00F7: return "";
      default: break;
    }
    static constexpr char base[] = {
        // C0..DF row, reused for E0..FF; special-cased entries are 0
        'a', 'a', 'a', 'a', 'a', 'a', 0, 'c', 'e', 'e', 'e', 'e',
        'i', 'i', 'i', 'i', 0,   'n', 'o', 'o', 'o', 'o', 'o', 0,
        'o', 'u', 'u', 'u', 'u', 'y', 0,   0};
    char c = base[(cp - 0x00C0) % 0x20];
    return c == 0 ? std::string_view{} : single_letter(c);
  }
  if (cp >= 0x0100 && cp <= 0x017F) {
    switch (cp) {
      case 0x0132: case 0x0133: return "ij";
      case 0x0152: case 0x0153: return "oe";
      default: break;
    }
    char c;
    if (cp <= 0x0105) c = 'a';
    else if (cp <= 0x010D) c = 'c';
    else if (cp <= 0x0111) c = 'd';
    else if (cp <= 0x011B) c = 'e';
    else if (cp <= 0x0123) c = 'g';
    else if (cp <= 0x0127) c = 'h';
    else if (cp <= 0x0131) c = 'i';
    else if (cp <= 0x0135) c = 'j';
    else if (cp <= 0x0138) c = 'k';
    else if (cp <= 0x0142) c = 'l';
    else if (cp <= 0x014B) c = 'n';
    else if (cp <= 0x0151) c = 'o';
    else if (cp <= 0x0159) c = 'r';
    else if (cp <= 0x0161) c = 's';
    else if (cp <= 0x0167) c = 't';
    else if (cp <= 0x0173) c = 'u';
    else if (cp <= 0x0175) c = 'w';
    else if (cp <= 0x0178) c = 'y';
    else if (cp <= 0x017E) c = 'z';
    else c = 's';  // U+017F long s
    return single_letter(c);
  }
  return "";
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// Shared normalization loop. keep_terminators preserves . ! ? in place;
// without it they become spaces (used for names and flattened search text).
std::string normalize_impl(std::string_view raw, bool keep_terminators) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  const auto emit = [&](char c) {
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    out += c;
  };
  std::size_t i = 0;
  while (i < raw.size()) {
    char32_t cp = decode_utf8(raw, i);
    if (cp < 0x80) {
      char c = static_cast<char>(cp);
      if (c >= 'A' && c <= 'Z') {
        emit(static_cast<char>(c - 'A' + 'a'));
      } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
        emit(c);
      } else if (keep_terminators && is_terminator(c)) {
        emit(c);
      } else {
        pending_space = true;
      }
      continue;
    }
    std::string_view folded = fold_latin(cp);
    if (folded.empty()) {
      pending_space = true;
    } else {
      for (char c : folded) emit(c);
    }
  }
  return out;
}

}  // namespace

std::string normalize_text(std::string_view raw) { return normalize_impl(raw, true); }

std::vector<Sentence> segment_sentences(std::string_view normalized) {
  std::vector<Sentence> sentences;
  std::vector<std::string> tokens;
  std::string current;

  const auto flush_token = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  const auto flush_sentence = [&] {
    flush_token();
    if (!tokens.empty()) {
      sentences.push_back(Sentence{static_cast<std::uint32_t>(sentences.size()),
                                   std::move(tokens)});
      tokens = {};
    }
  };

  for (std::size_t i = 0; i < normalized.size(); ++i) {
    char c = normalized[i];
    if (c == ' ') {
      flush_token();
    } else if (is_terminator(c)) {
      // Terminal only before a space or end of text; a terminator glued to
      // the next character ("e.g.", "3.14") is dropped from the token.
      if (i + 1 == normalized.size() || normalized[i + 1] == ' ') flush_sentence();
    } else {
      current += c;
    }
  }
  flush_sentence();
  return sentences;
}

SplitReferences extract_references(std::string_view normalized) {
  // A heading is "references" or "bibliography" on token boundaries that
  // starts a sentence: preceded by start of text or by "<terminator> ".
  constexpr std::string_view kHeadings[] = {"references", "bibliography"};
  std::size_t split_pos = std::string_view::npos;
  std::size_t heading_len = 0;
  for (std::string_view word : kHeadings) {
    std::size_t from = 0;
    while (true) {
      std::size_t p = normalized.find(word, from);
      if (p == std::string_view::npos) break;
      from = p + 1;
      std::size_t e = p + word.size();
      bool boundary_left = p == 0 || normalized[p - 1] == ' ';
      bool boundary_right = e == normalized.size() || normalized[e] == ' ' ||
                            is_terminator(normalized[e]);
      bool starts_sentence = p == 0 || (p >= 2 && normalized[p - 1] == ' ' &&
                                        is_terminator(normalized[p - 2]));
      if (boundary_left && boundary_right && starts_sentence &&
          (split_pos == std::string_view::npos || p > split_pos)) {
        split_pos = p;
        heading_len = word.size();
      }
    }
  }
  if (split_pos == std::string_view::npos) {
    return SplitReferences{std::string(normalized), ""};
  }
  std::size_t body_end = split_pos;
  while (body_end > 0 && normalized[body_end - 1] == ' ') --body_end;
  std::size_t ref_begin = split_pos + heading_len;
  if (ref_begin < normalized.size() && is_terminator(normalized[ref_begin])) ++ref_begin;
  while (ref_begin < normalized.size() && normalized[ref_begin] == ' ') ++ref_begin;
  return SplitReferences{std::string(normalized.substr(0, body_end)),
                         std::string(normalized.substr(ref_begin))};
}

std::string canonicalize_name(std::string_view raw) { return normalize_impl(raw, false); }

std::string flatten_for_search(std::string_view normalized) {
  return normalize_impl(normalized, false);
}

bool contains_word_sequence(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  std::size_t from = 0;
  while (true) {
    std::size_t p = haystack.find(needle, from);
    if (p == std::string_view::npos) return false;
    std::size_t e = p + needle.size();
    bool left_ok = p == 0 || haystack[p - 1] == ' ';
    bool right_ok = e == haystack.size() || haystack[e] == ' ';
    if (left_ok && right_ok) return true;
    from = p + 1;
  }
}

bool is_valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  while (i < bytes.size()) {
    unsigned char b0 = static_cast<unsigned char>(bytes[i]);
    if (b0 < 0x80) {
      ++i;
      continue;
    }
    int len;
    char32_t min_cp;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      min_cp = 0x80;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      min_cp = 0x800;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      min_cp = 0x10000;
      cp = b0 & 0x07;
    } else {
      return false;
    }
    if (i + len > bytes.size()) return false;
    for (int j = 1; j < len; ++j) {
      unsigned char b = static_cast<unsigned char>(bytes[i + j]);
      if ((b & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min_cp || cp > 0x10FFFF) return false;
    if (cp >= 0xD800 && cp <= 0xDFFF) return false;
    i += len;
  }
  return true;
}

}  // namespace overlap
