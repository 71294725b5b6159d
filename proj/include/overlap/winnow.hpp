#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "overlap/corpus.hpp"

namespace overlap {

/// Winnowing parameters. The window is measured in consecutive k-gram
/// hashes: a window of w hashes spans t = w + k - 1 words, so any shared
/// in-sentence run of at least t words yields a shared fingerprint.
struct WinnowParams {
  int k = 7;   // words per k-gram
  int t = 12;  // guarantee threshold, in words

  int window() const { return t - k + 1; }

  /// Throws std::invalid_argument unless k >= 1 and t >= k.
  void validate() const;

  bool operator==(const WinnowParams&) const = default;
};

/// A selected k-gram hash. Document identity is carried by the enclosing
/// collection; the position pins the k-gram inside its sentence.
struct Fingerprint {
  std::uint64_t hash = 0;
  std::uint32_t sentence_ordinal = 0;
  std::uint32_t token_offset = 0;  // start of the k-gram within the sentence

  bool operator==(const Fingerprint&) const = default;
};

/// Stable 64-bit hash of a token run (FNV-1a over the tokens joined with a
/// separator byte). Depends only on the token strings.
std::uint64_t hash_kgram(std::span<const std::string> tokens);

/// Hashes of all contiguous k-token runs: n tokens yield max(0, n - k + 1)
/// hashes. Sentences shorter than k words yield none.
std::vector<std::uint64_t> kgram_hashes(const Sentence& sentence, int k);

/// Winnows one sentence. With g = #k-gram hashes and w = params.window():
/// g = 0 selects nothing; 0 < g < w selects the single minimum hash;
/// otherwise each of the g - w + 1 sliding windows selects its minimum hash
/// (ties broken by rightmost position), emitted once per position.
std::vector<Fingerprint> winnow_sentence(const Sentence& sentence,
                                         const WinnowParams& params);

/// Concatenation of winnow_sentence over all sentences; no fingerprint
/// crosses a sentence boundary.
std::vector<Fingerprint> fingerprint_document(const Document& doc,
                                              const WinnowParams& params);

}  // namespace overlap
