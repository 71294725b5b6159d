#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "overlap/text.hpp"

namespace overlap {

/// An author identity. Equality is canonical-name equality only; the raw
/// name is kept for display.
struct AuthorRecord {
  std::string canonical_name;
  std::string raw_name;

  bool operator==(const AuthorRecord& other) const {
    return canonical_name == other.canonical_name;
  }
  bool operator<(const AuthorRecord& other) const {
    return canonical_name < other.canonical_name;
  }
};

struct Document {
  std::string doc_id;
  std::vector<AuthorRecord> authors;  // sorted by canonical name, deduplicated
  bool is_collaboration = false;
  std::optional<std::string> submission_date;  // ISO-8601 YYYY-MM-DD
  std::vector<Sentence> sentences;             // segmented body, dense ordinals
  std::string reference_text;                  // extracted references, may be empty
  std::string body_text;                       // normalized body (references removed)

  bool operator==(const Document&) const = default;
};

/// Builds a Document from raw text: normalize, split off references, segment.
/// Author names are canonicalized here; empty canonical names are dropped.
Document make_document(std::string doc_id, std::string_view raw_text,
                       const std::vector<std::string>& author_names,
                       bool is_collaboration = false,
                       std::optional<std::string> submission_date = std::nullopt);

struct SkippedFile {
  std::string doc_id;
  std::string reason;
};

struct CorpusLoad {
  std::vector<Document> documents;  // in metadata order
  std::vector<SkippedFile> skipped;
};

/// Loads a corpus directory: one `<doc_id>.txt` per document plus a
/// `corpus.meta.jsonl` metadata file (one JSON record per line with fields
/// doc_id, authors, collaboration, date; unknown fields ignored).
///
/// A missing or malformed metadata file and duplicate doc_ids are fatal
/// (CorpusError). Unreadable, missing, or non-UTF-8 document files are
/// skipped and reported. `jobs` bounds worker threads (0 = all cores).
CorpusLoad load_corpus(const std::filesystem::path& corpus_dir, unsigned jobs = 0);

/// Reads only the metadata file: doc_id -> ISO date for the records that
/// carry a valid date. Throws CorpusError when the metadata file is missing.
std::map<std::string, std::string> load_corpus_dates(
    const std::filesystem::path& corpus_dir);

}  // namespace overlap
