#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "overlap/index.hpp"

namespace overlap {

/// Pair-detection parameters. The reduction to winnowing requires mu = k and
/// nu = t of the index the detection runs against.
struct SimilarityParams {
  int mu = 7;  // common-sequence length in words (= k)
  int L = 4;   // commonness threshold
  int nu = 12; // similarity run length in words (= t)
  int m = 4;   // minimum similar sentences per side

  /// Document-count cap per posting list during candidate generation:
  /// -1 = default (2 * L * 100), 0 = off.
  long posting_cap = -1;

  long effective_cap() const { return posting_cap < 0 ? 2L * L * 100 : posting_cap; }

  static SimilarityParams for_index(const WinnowParams& wp, int L = 4, int m = 4) {
    return SimilarityParams{wp.k, L, wp.t, m, -1};
  }

  /// Throws std::invalid_argument unless mu == wp.k, nu == wp.t, L >= 1,
  /// m >= 1.
  void validate_against(const WinnowParams& wp) const;
};

/// A sentence pair sharing at least one uncommon fingerprint hash.
struct SentenceMatch {
  std::uint32_t doc_a = 0;  // index into the doc table, doc_a < doc_b
  std::uint32_t doc_b = 0;
  std::uint32_t sentence_a = 0;
  std::uint32_t sentence_b = 0;
  std::vector<std::uint64_t> shared_hashes;  // sorted, deduplicated, non-empty

  friend bool operator==(const SentenceMatch&, const SentenceMatch&) = default;
};

/// Shared-fingerprint tally. X shared fingerprints can witness as little as
/// k + X - 1 consecutive words, so this is never the overlap measure; the
/// overlap is counted in similar sentences.
struct OverlapCount {
  int value = 0;
};

/// A candidate document pair with the matched sentence ordinals on each side.
/// The overlap size is the smaller side's count.
struct DocumentPair {
  std::string doc_a;  // lexicographically smaller id
  std::string doc_b;
  std::vector<std::uint32_t> sentences_a;  // sorted
  std::vector<std::uint32_t> sentences_b;
  int overlap_size = 0;
  OverlapCount shared_fingerprints;
};

/// Emits matches for every cross-document posting pair of every uncommon
/// hash, aggregated per (document pair, sentence pair), sorted. Hashes whose
/// posting list touches more documents than the cap are skipped.
/// mark_common must have run on the index.
std::vector<SentenceMatch> find_sentence_matches(const FingerprintIndex& index,
                                                 const SimilarityParams& params,
                                                 unsigned jobs = 0);

/// Keeps the pairs where both matched-sentence sets have size >= m: a
/// superset of all (k, L; t, m)-similar pairs. Output sorted by (doc_a, doc_b).
std::vector<DocumentPair> aggregate_pairs(const FingerprintIndex& index,
                                          std::span<const SentenceMatch> matches,
                                          int m);

/// Re-checks each match against the raw token runs, dropping hashes not
/// backed by an identical k-word run on both sides (hash-collision audit).
/// Matches losing all witnesses are removed.
std::vector<SentenceMatch> verify_matches(const FingerprintIndex& index,
                                          std::span<const SentenceMatch> matches,
                                          std::span<const Document> docs);

/// Screens one new document against a prebuilt index without mutating it.
/// Result equals the pair set involving `doc` after a full rebuild with it
/// added; commonness is re-decided per touched hash with the document
/// inserted into the authorship scan. Throws DataError when doc_id is
/// already indexed.
std::vector<DocumentPair> screen_document(const Document& doc,
                                          const FingerprintIndex& index,
                                          const SimilarityParams& params);

}  // namespace overlap
