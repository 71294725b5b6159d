#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace overlap {

/// A sentence is an ordered run of normalized word tokens. Tokens are
/// non-empty, lowercase, and contain no whitespace or punctuation.
struct Sentence {
  std::uint32_t ordinal = 0;  // 0-based position within the document
  std::vector<std::string> tokens;

  bool operator==(const Sentence&) const = default;
};

/// Lowercases the input and replaces every character that is not a letter or
/// digit with a single space, keeping sentence terminators (. ! ?) in place.
/// Latin letters with diacritics fold to their ASCII base form; all other
/// non-ASCII code points count as non-letters. Whitespace runs collapse to a
/// single space and the result carries no leading or trailing space.
std::string normalize_text(std::string_view raw);

/// Splits normalized text into sentences. A terminator (. ! ?) ends a
/// sentence only when followed by a space or end of text; a trailing
/// unterminated segment still forms a sentence. Terminator characters are
/// dropped from tokens and empty segments are discarded.
std::vector<Sentence> segment_sentences(std::string_view normalized);

struct SplitReferences {
  std::string body;
  std::string reference_text;
};

/// Splits normalized text at the last "references" / "bibliography" heading.
/// A heading is an occurrence of either word at a token boundary that starts
/// a sentence (preceded by a terminator or start of text). When no heading is
/// found the whole input is the body and reference_text is empty.
SplitReferences extract_references(std::string_view normalized);

/// Normalizes an author name: lowercase, diacritics folded, punctuation
/// replaced by spaces, whitespace collapsed. Returns "" for names with no
/// alphanumeric content.
std::string canonicalize_name(std::string_view raw);

/// Flattens normalized text for word-boundary searching: terminators become
/// spaces and runs collapse. Used by the authorship heuristics.
std::string flatten_for_search(std::string_view normalized);

/// True when `needle` appears in `haystack` on token boundaries. Both sides
/// must already be flattened (lowercase words separated by single spaces).
bool contains_word_sequence(std::string_view haystack, std::string_view needle);

/// Structural UTF-8 validation (sequence lengths, continuation bytes, code
/// point ranges, no overlongs or surrogates).
bool is_valid_utf8(std::string_view bytes);

}  // namespace overlap
