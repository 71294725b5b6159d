#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "overlap/corpus.hpp"
#include "overlap/error.hpp"
#include "overlap/winnow.hpp"

namespace overlap {

/// One fingerprint occurrence: document (index into the doc table, which is
/// sorted by doc_id) and sentence ordinal.
struct Posting {
  std::uint32_t doc = 0;
  std::uint32_t sentence = 0;

  friend auto operator<=>(const Posting&, const Posting&) = default;
};

/// Inverted index from fingerprint hashes to postings, with per-hash
/// commonness marking. Immutable once built and marked; safe for concurrent
/// readers.
class FingerprintIndex {
 public:
  struct DocRecord {
    std::string doc_id;
    std::vector<std::string> authors;  // canonical, sorted
    bool collaboration = false;

    bool operator==(const DocRecord&) const = default;
  };

  /// Builds the index: winnows every document and enters one posting per
  /// fingerprint, deduplicated per (hash, doc, sentence). Posting lists end
  /// up sorted by (doc_id, sentence). Throws IndexError on duplicate doc_id.
  static FingerprintIndex build(std::span<const Document> docs,
                                const WinnowParams& params, unsigned jobs = 0);

  const WinnowParams& params() const { return params_; }
  const std::vector<DocRecord>& documents() const { return docs_; }
  const std::string& doc_id(std::uint32_t index) const { return docs_[index].doc_id; }
  std::optional<std::uint32_t> find_doc(std::string_view doc_id) const;

  const std::unordered_map<std::uint64_t, std::vector<Posting>>& entries() const {
    return entries_;
  }
  const std::unordered_set<std::uint64_t>& common_hashes() const { return common_; }
  bool is_common(std::uint64_t hash) const { return common_.contains(hash); }

  /// Token text of each L-common k-gram, retained only for common hashes.
  const std::map<std::uint64_t, std::vector<std::string>>& common_gram_tokens() const {
    return common_grams_;
  }

  std::size_t posting_count() const { return posting_count_; }
  std::vector<std::uint64_t> sorted_hashes() const;

  /// The L used by the last mark_common call, 0 when never marked.
  int marked_L() const { return marked_L_; }

  /// Marks every hash held by at least L documents with pairwise disjoint
  /// authorship (greedy, scanning documents in doc_id order; collaboration
  /// documents count as disjoint from everything). Returns the common set.
  const std::unordered_set<std::uint64_t>& mark_common(int L);

  /// Records the token text of every common hash by rescanning the corpus
  /// the index was built from. Must run after mark_common for the common
  /// k-gram report to work.
  void collect_common_gram_text(std::span<const Document> docs);

  /// Greedy disjoint-authorship count over the given documents, scanned in
  /// ascending index (= doc_id) order. `extra`, when given, is an unindexed
  /// document considered at its own doc_id position in the scan.
  int disjoint_authorship_count(std::span<const std::uint32_t> doc_indices,
                                const DocRecord* extra = nullptr) const;

 private:
  friend FingerprintIndex load_index(const std::filesystem::path&);

  void rebuild_doc_lookup();

  WinnowParams params_;
  int marked_L_ = 0;
  std::vector<DocRecord> docs_;  // sorted by doc_id
  std::unordered_map<std::string, std::uint32_t> doc_lookup_;
  std::unordered_map<std::uint64_t, std::vector<Posting>> entries_;
  std::unordered_set<std::uint64_t> common_;
  std::map<std::uint64_t, std::vector<std::string>> common_grams_;
  std::size_t posting_count_ = 0;
};

/// Writes the index in the versioned binary `.fpidx` format (magic header,
/// parameter block, doc table, hash-sorted posting sections, common set,
/// common gram text, trailing checksum). save(load(save(x))) is
/// byte-identical to save(x).
void save_index(const FingerprintIndex& index, const std::filesystem::path& path);

/// Reads an index file; throws IndexError on bad magic, version mismatch,
/// truncation, or checksum failure.
FingerprintIndex load_index(const std::filesystem::path& path);

/// Recomputes the trailing checksum without deserializing the whole file.
bool verify_index_file(const std::filesystem::path& path, std::string* error = nullptr);

}  // namespace overlap
