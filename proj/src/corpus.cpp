#include "overlap/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "json.hpp"
#include "overlap/error.hpp"
#include "overlap/parallel.hpp"

namespace overlap {

namespace {

bool looks_like_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

bool read_file(const std::filesystem::path& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return false;
  out = buf.str();
  return true;
}

struct MetaEntry {
  std::string doc_id;
  std::vector<std::string> authors;
  bool collaboration = false;
  std::optional<std::string> date;
};

std::vector<MetaEntry> parse_metadata(const std::filesystem::path& meta_path) {
  std::ifstream in(meta_path);
  if (!in) {
    throw CorpusError("cannot open metadata file: " + meta_path.string());
  }
  std::vector<MetaEntry> entries;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw CorpusError(meta_path.string() + ":" + std::to_string(line_no) +
                        ": malformed metadata record: " + e.what());
    }
    MetaEntry entry;
    if (!record.is_object() || !record.contains("doc_id") ||
        !record["doc_id"].is_string() || record["doc_id"].get<std::string>().empty()) {
      throw CorpusError(meta_path.string() + ":" + std::to_string(line_no) +
                        ": metadata record lacks a doc_id");
    }
    entry.doc_id = record["doc_id"].get<std::string>();
    if (!seen_ids.insert(entry.doc_id).second) {
      throw CorpusError("duplicate doc_id in metadata: " + entry.doc_id);
    }
    if (record.contains("authors") && record["authors"].is_array()) {
      for (const auto& a : record["authors"]) {
        if (a.is_string()) entry.authors.push_back(a.get<std::string>());
      }
    }
    if (record.contains("collaboration") && record["collaboration"].is_boolean()) {
      entry.collaboration = record["collaboration"].get<bool>();
    }
    if (record.contains("date") && record["date"].is_string()) {
      std::string d = record["date"].get<std::string>();
      if (looks_like_iso_date(d)) entry.date = std::move(d);
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace

Document make_document(std::string doc_id, std::string_view raw_text,
                       const std::vector<std::string>& author_names,
                       bool is_collaboration,
                       std::optional<std::string> submission_date) {
  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.is_collaboration = is_collaboration;
  doc.submission_date = std::move(submission_date);
  for (const std::string& raw_name : author_names) {
    std::string canonical = canonicalize_name(raw_name);
    if (canonical.empty()) continue;
    doc.authors.push_back(AuthorRecord{std::move(canonical), raw_name});
  }
  std::sort(doc.authors.begin(), doc.authors.end());
  doc.authors.erase(std::unique(doc.authors.begin(), doc.authors.end()),
                    doc.authors.end());

  std::string normalized = normalize_text(raw_text);
  SplitReferences split = extract_references(normalized);
  doc.body_text = std::move(split.body);
  doc.reference_text = std::move(split.reference_text);
  doc.sentences = segment_sentences(doc.body_text);
  return doc;
}

CorpusLoad load_corpus(const std::filesystem::path& corpus_dir, unsigned jobs) {
  const auto meta_path = corpus_dir / "corpus.meta.jsonl";
  std::vector<MetaEntry> entries = parse_metadata(meta_path);

  struct Slot {
    std::optional<Document> doc;
    std::string skip_reason;
    std::string raw;
  };
  std::vector<Slot> slots(entries.size());

  // File reads stay sequential; normalization and segmentation are the
  // heavy part and run per-document in parallel.
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const MetaEntry& entry = entries[i];
    const auto doc_path = corpus_dir / (entry.doc_id + ".txt");
    std::error_code ec;
    if (!std::filesystem::exists(doc_path, ec) || ec) {
      slots[i].skip_reason = "file missing";
      continue;
    }
    if (!read_file(doc_path, slots[i].raw)) {
      slots[i].skip_reason = "unreadable";
      continue;
    }
    if (!is_valid_utf8(slots[i].raw)) {
      slots[i].skip_reason = "invalid encoding";
      slots[i].raw.clear();
    }
  }

  parallel_chunks(entries.size(), jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (!slots[i].skip_reason.empty()) continue;
      const MetaEntry& entry = entries[i];
      Document doc = make_document(entry.doc_id, slots[i].raw, entry.authors,
                                   entry.collaboration, entry.date);
      slots[i].raw.clear();
      if (doc.authors.empty() && !doc.is_collaboration) {
        slots[i].skip_reason = "no authors";
        continue;
      }
      slots[i].doc = std::move(doc);
    }
  });

  CorpusLoad result;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (slots[i].doc) {
      result.documents.push_back(std::move(*slots[i].doc));
    } else {
      result.skipped.push_back(SkippedFile{entries[i].doc_id, slots[i].skip_reason});
    }
  }
  return result;
}

std::map<std::string, std::string> load_corpus_dates(
    const std::filesystem::path& corpus_dir) {
  std::map<std::string, std::string> dates;
  for (const MetaEntry& entry : parse_metadata(corpus_dir / "corpus.meta.jsonl")) {
    if (entry.date) dates[entry.doc_id] = *entry.date;
  }
  return dates;
}

}  // namespace overlap
