#include "overlap/index.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string_view>

#include "overlap/parallel.hpp"

namespace overlap {

namespace {

constexpr std::string_view kMagic = "FPIX";
constexpr std::uint32_t kFormatVersion = 1;

std::uint64_t fnv1a_bytes(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Little-endian fixed-width encoding; strings are u32 length + bytes.
struct ByteWriter {
  std::string buf;

  void u8(std::uint8_t v) { buf.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf.append(s);
  }
};

struct ByteReader {
  std::string_view buf;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > buf.size()) throw IndexError("truncated index file");
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(buf[pos++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  std::string str() {
    std::uint32_t n = u32();
    need(n);
    std::string s(buf.substr(pos, n));
    pos += n;
    return s;
  }
};

bool read_whole_file(const std::filesystem::path& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  in.seekg(0, std::ios::end);
  auto size = in.tellg();
  if (size < 0) return false;
  out.resize(static_cast<std::size_t>(size));
  in.seekg(0);
  in.read(out.data(), size);
  return !in.bad() && in.gcount() == size;
}

}  // namespace

std::optional<std::uint32_t> FingerprintIndex::find_doc(std::string_view doc_id) const {
  auto it = doc_lookup_.find(std::string(doc_id));
  if (it == doc_lookup_.end()) return std::nullopt;
  return it->second;
}

void FingerprintIndex::rebuild_doc_lookup() {
  doc_lookup_.clear();
  doc_lookup_.reserve(docs_.size());
  for (std::uint32_t i = 0; i < docs_.size(); ++i) doc_lookup_[docs_[i].doc_id] = i;
}

std::vector<std::uint64_t> FingerprintIndex::sorted_hashes() const {
  std::vector<std::uint64_t> hashes;
  hashes.reserve(entries_.size());
  for (const auto& [hash, postings] : entries_) hashes.push_back(hash);
  std::sort(hashes.begin(), hashes.end());
  return hashes;
}

FingerprintIndex FingerprintIndex::build(std::span<const Document> docs,
                                         const WinnowParams& params, unsigned jobs) {
  params.validate();
  FingerprintIndex index;
  index.params_ = params;

  // Doc table in doc_id order, so posting doc indices sort like doc ids.
  std::vector<std::uint32_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return docs[a].doc_id < docs[b].doc_id;
  });
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    if (docs[order[i]].doc_id == docs[order[i + 1]].doc_id) {
      throw IndexError("duplicate doc_id: " + docs[order[i]].doc_id);
    }
  }

  index.docs_.reserve(docs.size());
  for (std::uint32_t src : order) {
    DocRecord record;
    record.doc_id = docs[src].doc_id;
    record.collaboration = docs[src].is_collaboration;
    for (const AuthorRecord& a : docs[src].authors) record.authors.push_back(a.canonical_name);
    index.docs_.push_back(std::move(record));
  }
  index.rebuild_doc_lookup();

  std::vector<std::vector<Fingerprint>> fingerprints(docs.size());
  parallel_chunks(order.size(), jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      fingerprints[i] = fingerprint_document(docs[order[i]], params);
    }
  });

  for (std::uint32_t d = 0; d < fingerprints.size(); ++d) {
    for (const Fingerprint& fp : fingerprints[d]) {
      auto& postings = index.entries_[fp.hash];
      Posting posting{d, fp.sentence_ordinal};
      // Insertion runs in (doc, sentence) order, so a duplicate
      // (hash, doc, sentence) is always adjacent.
      if (!postings.empty() && postings.back() == posting) continue;
      postings.push_back(posting);
      ++index.posting_count_;
    }
    fingerprints[d].clear();
    fingerprints[d].shrink_to_fit();
  }
  return index;
}

int FingerprintIndex::disjoint_authorship_count(
    std::span<const std::uint32_t> doc_indices, const DocRecord* extra) const {
  int accepted = 0;
  std::unordered_set<std::string_view> used_authors;
  const auto consider = [&](const DocRecord& d) {
    // A collaboration is disjoint from everything except itself; its listed
    // names do not block later documents.
    if (d.collaboration) {
      ++accepted;
      return;
    }
    for (const std::string& a : d.authors) {
      if (used_authors.contains(a)) return;
    }
    for (const std::string& a : d.authors) used_authors.insert(a);
    ++accepted;
  };

  std::size_t i = 0;
  bool extra_pending = extra != nullptr;
  while (i < doc_indices.size()) {
    const DocRecord& current = docs_[doc_indices[i]];
    if (extra_pending && extra->doc_id < current.doc_id) {
      consider(*extra);
      extra_pending = false;
      continue;
    }
    consider(current);
    ++i;
  }
  if (extra_pending) consider(*extra);
  return accepted;
}

const std::unordered_set<std::uint64_t>& FingerprintIndex::mark_common(int L) {
  if (L < 1) throw std::invalid_argument("mark_common: L must be >= 1");
  common_.clear();
  common_grams_.clear();
  marked_L_ = L;
  std::vector<std::uint32_t> distinct_docs;
  for (const auto& [hash, postings] : entries_) {
    distinct_docs.clear();
    for (const Posting& p : postings) {
      if (distinct_docs.empty() || distinct_docs.back() != p.doc) {
        distinct_docs.push_back(p.doc);
      }
    }
    if (distinct_docs.size() < static_cast<std::size_t>(L)) continue;
    if (disjoint_authorship_count(distinct_docs) >= L) common_.insert(hash);
  }
  return common_;
}

void FingerprintIndex::collect_common_gram_text(std::span<const Document> docs) {
  common_grams_.clear();
  if (common_.empty()) return;

  // First occurrence wins, scanning in doc_id / sentence / offset order so
  // the retained text is deterministic.
  std::vector<const Document*> ordered;
  ordered.reserve(docs.size());
  for (const Document& d : docs) ordered.push_back(&d);
  std::sort(ordered.begin(), ordered.end(),
            [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });

  const int k = params_.k;
  for (const Document* doc : ordered) {
    if (common_grams_.size() == common_.size()) break;
    for (const Sentence& sentence : doc->sentences) {
      if (sentence.tokens.size() < static_cast<std::size_t>(k)) continue;
      for (std::size_t i = 0; i + k <= sentence.tokens.size(); ++i) {
        std::span<const std::string> gram(&sentence.tokens[i], k);
        std::uint64_t hash = hash_kgram(gram);
        if (!common_.contains(hash) || common_grams_.contains(hash)) continue;
        common_grams_.emplace(hash, std::vector<std::string>(gram.begin(), gram.end()));
      }
    }
  }
}

void save_index(const FingerprintIndex& index, const std::filesystem::path& path) {
  ByteWriter w;
  w.buf.append(kMagic);
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(index.params().k));
  w.u32(static_cast<std::uint32_t>(index.params().t));
  w.u32(static_cast<std::uint32_t>(index.marked_L()));

  const auto& docs = index.documents();
  w.u32(static_cast<std::uint32_t>(docs.size()));
  for (const auto& d : docs) {
    w.str(d.doc_id);
    w.u32(static_cast<std::uint32_t>(d.authors.size()));
    for (const auto& a : d.authors) w.str(a);
    w.u8(d.collaboration ? 1 : 0);
  }

  const auto hashes = index.sorted_hashes();
  w.u64(hashes.size());
  for (std::uint64_t hash : hashes) {
    const auto& postings = index.entries().at(hash);
    w.u64(hash);
    w.u32(static_cast<std::uint32_t>(postings.size()));
    for (const Posting& p : postings) {
      w.u32(p.doc);
      w.u32(p.sentence);
    }
  }

  std::vector<std::uint64_t> common(index.common_hashes().begin(),
                                    index.common_hashes().end());
  std::sort(common.begin(), common.end());
  w.u64(common.size());
  for (std::uint64_t hash : common) w.u64(hash);

  const auto& grams = index.common_gram_tokens();
  w.u64(grams.size());
  for (const auto& [hash, tokens] : grams) {
    w.u64(hash);
    w.u32(static_cast<std::uint32_t>(tokens.size()));
    for (const auto& token : tokens) w.str(token);
  }

  w.u64(fnv1a_bytes(w.buf));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IndexError("cannot open index file for writing: " + path.string());
  out.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
  out.flush();
  if (!out) throw IndexError("failed writing index file: " + path.string());
}

FingerprintIndex load_index(const std::filesystem::path& path) {
  std::string bytes;
  if (!read_whole_file(path, bytes)) {
    throw IndexError("cannot read index file: " + path.string());
  }
  if (bytes.size() < kMagic.size() + 4 + 8) throw IndexError("truncated index file");
  if (std::string_view(bytes).substr(0, kMagic.size()) != kMagic) {
    throw IndexError("not an index file (bad magic): " + path.string());
  }
  std::string_view payload(bytes.data(), bytes.size() - 8);
  ByteReader tail{std::string_view(bytes), bytes.size() - 8};
  if (tail.u64() != fnv1a_bytes(payload)) {
    throw IndexError("index checksum mismatch: " + path.string());
  }

  ByteReader r{payload, kMagic.size()};
  std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw IndexError("unsupported index version " + std::to_string(version));
  }

  FingerprintIndex index;
  index.params_.k = static_cast<int>(r.u32());
  index.params_.t = static_cast<int>(r.u32());
  index.params_.validate();
  index.marked_L_ = static_cast<int>(r.u32());

  std::uint32_t doc_count = r.u32();
  index.docs_.reserve(doc_count);
  for (std::uint32_t i = 0; i < doc_count; ++i) {
    FingerprintIndex::DocRecord d;
    d.doc_id = r.str();
    std::uint32_t author_count = r.u32();
    d.authors.reserve(author_count);
    for (std::uint32_t j = 0; j < author_count; ++j) d.authors.push_back(r.str());
    d.collaboration = r.u8() != 0;
    index.docs_.push_back(std::move(d));
  }
  index.rebuild_doc_lookup();

  std::uint64_t hash_count = r.u64();
  index.entries_.reserve(hash_count);
  for (std::uint64_t i = 0; i < hash_count; ++i) {
    std::uint64_t hash = r.u64();
    std::uint32_t posting_count = r.u32();
    std::vector<Posting> postings;
    postings.reserve(posting_count);
    for (std::uint32_t j = 0; j < posting_count; ++j) {
      Posting p{r.u32(), r.u32()};
      if (p.doc >= doc_count) throw IndexError("corrupt index: posting references unknown document");
      postings.push_back(p);
    }
    index.posting_count_ += postings.size();
    index.entries_.emplace(hash, std::move(postings));
  }

  std::uint64_t common_count = r.u64();
  for (std::uint64_t i = 0; i < common_count; ++i) index.common_.insert(r.u64());

  std::uint64_t gram_count = r.u64();
  for (std::uint64_t i = 0; i < gram_count; ++i) {
    std::uint64_t hash = r.u64();
    std::uint32_t token_count = r.u32();
    std::vector<std::string> tokens;
    tokens.reserve(token_count);
    for (std::uint32_t j = 0; j < token_count; ++j) tokens.push_back(r.str());
    index.common_grams_.emplace(hash, std::move(tokens));
  }
  if (r.pos != payload.size()) throw IndexError("corrupt index: trailing bytes");
  return index;
}

bool verify_index_file(const std::filesystem::path& path, std::string* error) {
  std::string bytes;
  if (!read_whole_file(path, bytes)) {
    if (error) *error = "cannot read file";
    return false;
  }
  if (bytes.size() < kMagic.size() + 8) {
    if (error) *error = "file too short";
    return false;
  }
  if (std::string_view(bytes).substr(0, kMagic.size()) != kMagic) {
    if (error) *error = "bad magic";
    return false;
  }
  std::string_view payload(bytes.data(), bytes.size() - 8);
  ByteReader tail{std::string_view(bytes), bytes.size() - 8};
  if (tail.u64() != fnv1a_bytes(payload)) {
    if (error) *error = "checksum mismatch";
    return false;
  }
  return true;
}

}  // namespace overlap
