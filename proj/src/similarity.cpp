#include "overlap/similarity.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "overlap/parallel.hpp"

namespace overlap {

void SimilarityParams::validate_against(const WinnowParams& wp) const {
  if (mu != wp.k) {
    throw std::invalid_argument("similarity: mu must equal the index's k");
  }
  if (nu != wp.t) {
    throw std::invalid_argument("similarity: nu must equal the index's t");
  }
  if (L < 1) throw std::invalid_argument("similarity: L must be >= 1");
  if (m < 1) throw std::invalid_argument("similarity: m must be >= 1");
}

namespace {

// (doc_a, doc_b, sentence_a, sentence_b) with doc_a < doc_b.
using MatchKey = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t>;
using MatchAccumulator = std::map<MatchKey, std::vector<std::uint64_t>>;

struct DocGroup {
  std::uint32_t doc;
  std::vector<std::uint32_t> sentences;
};

std::vector<DocGroup> group_by_document(const std::vector<Posting>& postings) {
  std::vector<DocGroup> groups;
  for (const Posting& p : postings) {
    if (groups.empty() || groups.back().doc != p.doc) {
      groups.push_back(DocGroup{p.doc, {}});
    }
    groups.back().sentences.push_back(p.sentence);
  }
  return groups;
}

void accumulate_hash(std::uint64_t hash, const std::vector<DocGroup>& groups,
                     MatchAccumulator& acc) {
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      for (std::uint32_t sa : groups[i].sentences) {
        for (std::uint32_t sb : groups[j].sentences) {
          acc[MatchKey{groups[i].doc, groups[j].doc, sa, sb}].push_back(hash);
        }
      }
    }
  }
}

std::vector<std::string> tokens_of_runs_with_hash(const Sentence& sentence, int k,
                                                  std::uint64_t hash) {
  std::vector<std::string> runs;
  if (sentence.tokens.size() < static_cast<std::size_t>(k)) return runs;
  for (std::size_t i = 0; i + k <= sentence.tokens.size(); ++i) {
    std::span<const std::string> gram(&sentence.tokens[i], k);
    if (hash_kgram(gram) != hash) continue;
    std::string joined;
    for (const std::string& token : gram) {
      if (!joined.empty()) joined.push_back('\x1f');
      joined += token;
    }
    runs.push_back(std::move(joined));
  }
  return runs;
}

}  // namespace

std::vector<SentenceMatch> find_sentence_matches(const FingerprintIndex& index,
                                                 const SimilarityParams& params,
                                                 unsigned jobs) {
  params.validate_against(index.params());
  const long cap = params.effective_cap();

  std::vector<std::uint64_t> hashes = index.sorted_hashes();
  const ChunkPlan plan = ChunkPlan::make(hashes.size(), jobs);
  std::vector<MatchAccumulator> partials(plan.workers);

  parallel_chunks(hashes.size(), jobs, [&](std::size_t begin, std::size_t end) {
    // Chunks own disjoint hash ranges, so each accumulator is thread-local.
    MatchAccumulator& acc = partials[plan.chunk_index(begin)];
    for (std::size_t i = begin; i < end; ++i) {
      std::uint64_t hash = hashes[i];
      if (index.is_common(hash)) continue;
      const auto& postings = index.entries().at(hash);
      auto groups = group_by_document(postings);
      if (groups.size() < 2) continue;
      if (cap > 0 && static_cast<long>(groups.size()) > cap) continue;
      accumulate_hash(hash, groups, acc);
    }
  });

  MatchAccumulator merged = std::move(partials[0]);
  for (std::size_t i = 1; i < partials.size(); ++i) {
    for (auto& [key, hash_list] : partials[i]) {
      auto& target = merged[key];
      target.insert(target.end(), hash_list.begin(), hash_list.end());
    }
  }

  std::vector<SentenceMatch> matches;
  matches.reserve(merged.size());
  for (auto& [key, hash_list] : merged) {
    std::sort(hash_list.begin(), hash_list.end());
    hash_list.erase(std::unique(hash_list.begin(), hash_list.end()), hash_list.end());
    matches.push_back(SentenceMatch{std::get<0>(key), std::get<1>(key),
                                    std::get<2>(key), std::get<3>(key),
                                    std::move(hash_list)});
  }
  return matches;
}

std::vector<DocumentPair> aggregate_pairs(const FingerprintIndex& index,
                                          std::span<const SentenceMatch> matches,
                                          int m) {
  if (m < 1) throw std::invalid_argument("aggregate_pairs: m must be >= 1");

  struct PairAccum {
    std::set<std::uint32_t> sentences_a;
    std::set<std::uint32_t> sentences_b;
    std::set<std::uint64_t> hashes;
  };
  std::map<std::pair<std::uint32_t, std::uint32_t>, PairAccum> accum;
  for (const SentenceMatch& match : matches) {
    PairAccum& acc = accum[{match.doc_a, match.doc_b}];
    acc.sentences_a.insert(match.sentence_a);
    acc.sentences_b.insert(match.sentence_b);
    acc.hashes.insert(match.shared_hashes.begin(), match.shared_hashes.end());
  }

  std::vector<DocumentPair> pairs;
  for (const auto& [key, acc] : accum) {
    int side_a = static_cast<int>(acc.sentences_a.size());
    int side_b = static_cast<int>(acc.sentences_b.size());
    if (std::min(side_a, side_b) < m) continue;
    DocumentPair pair;
    pair.doc_a = index.doc_id(key.first);
    pair.doc_b = index.doc_id(key.second);
    pair.sentences_a.assign(acc.sentences_a.begin(), acc.sentences_a.end());
    pair.sentences_b.assign(acc.sentences_b.begin(), acc.sentences_b.end());
    pair.overlap_size = std::min(side_a, side_b);
    pair.shared_fingerprints = OverlapCount{static_cast<int>(acc.hashes.size())};
    pairs.push_back(std::move(pair));
  }
  return pairs;  // accum is keyed by ascending doc index == ascending doc_id
}

std::vector<SentenceMatch> verify_matches(const FingerprintIndex& index,
                                          std::span<const SentenceMatch> matches,
                                          std::span<const Document> docs) {
  std::map<std::string_view, const Document*> by_id;
  for (const Document& d : docs) by_id[d.doc_id] = &d;
  const int k = index.params().k;

  const auto resolve = [&](std::uint32_t doc_index) -> const Document& {
    auto it = by_id.find(index.doc_id(doc_index));
    if (it == by_id.end()) {
      throw DataError("verify_matches: document missing from corpus: " +
                      index.doc_id(doc_index));
    }
    return *it->second;
  };

  std::vector<SentenceMatch> verified;
  for (const SentenceMatch& match : matches) {
    const Document& doc_a = resolve(match.doc_a);
    const Document& doc_b = resolve(match.doc_b);
    if (match.sentence_a >= doc_a.sentences.size() ||
        match.sentence_b >= doc_b.sentences.size()) {
      throw DataError("verify_matches: sentence ordinal out of range (stale index?)");
    }
    const Sentence& sa = doc_a.sentences[match.sentence_a];
    const Sentence& sb = doc_b.sentences[match.sentence_b];

    std::vector<std::uint64_t> surviving;
    for (std::uint64_t hash : match.shared_hashes) {
      auto runs_a = tokens_of_runs_with_hash(sa, k, hash);
      if (runs_a.empty()) continue;
      auto runs_b = tokens_of_runs_with_hash(sb, k, hash);
      bool backed = false;
      for (const std::string& run : runs_a) {
        if (std::find(runs_b.begin(), runs_b.end(), run) != runs_b.end()) {
          backed = true;
          break;
        }
      }
      if (backed) surviving.push_back(hash);
    }
    if (!surviving.empty()) {
      SentenceMatch kept = match;
      kept.shared_hashes = std::move(surviving);
      verified.push_back(std::move(kept));
    }
  }
  return verified;
}

std::vector<DocumentPair> screen_document(const Document& doc,
                                          const FingerprintIndex& index,
                                          const SimilarityParams& params) {
  params.validate_against(index.params());
  if (index.find_doc(doc.doc_id)) {
    throw DataError("screen: doc_id already indexed: " + doc.doc_id);
  }
  const long cap = params.effective_cap();

  FingerprintIndex::DocRecord extra;
  extra.doc_id = doc.doc_id;
  extra.collaboration = doc.is_collaboration;
  for (const AuthorRecord& a : doc.authors) extra.authors.push_back(a.canonical_name);

  // The document's hashes with the sentences they were selected from.
  std::map<std::uint64_t, std::vector<std::uint32_t>> own;
  for (const Fingerprint& fp : fingerprint_document(doc, index.params())) {
    auto& sentences = own[fp.hash];
    if (sentences.empty() || sentences.back() != fp.sentence_ordinal) {
      sentences.push_back(fp.sentence_ordinal);
    }
  }

  struct PairAccum {
    std::set<std::uint32_t> own_sentences;
    std::set<std::uint32_t> other_sentences;
    std::set<std::uint64_t> hashes;
  };
  std::map<std::uint32_t, PairAccum> accum;
  std::vector<std::uint32_t> distinct_docs;

  for (const auto& [hash, own_sentences] : own) {
    auto it = index.entries().find(hash);
    if (it == index.entries().end()) continue;
    const auto& postings = it->second;

    distinct_docs.clear();
    for (const Posting& p : postings) {
      if (distinct_docs.empty() || distinct_docs.back() != p.doc) {
        distinct_docs.push_back(p.doc);
      }
    }
    // Counts and commonness are decided as if this document were indexed:
    // it joins the posting population and the authorship scan.
    if (cap > 0 && static_cast<long>(distinct_docs.size()) + 1 > cap) continue;
    if (index.disjoint_authorship_count(distinct_docs, &extra) >= params.L) continue;

    for (const Posting& p : postings) {
      PairAccum& acc = accum[p.doc];
      acc.other_sentences.insert(p.sentence);
      acc.own_sentences.insert(own_sentences.begin(), own_sentences.end());
      acc.hashes.insert(hash);
    }
  }

  std::vector<DocumentPair> pairs;
  for (const auto& [other_doc, acc] : accum) {
    int own_side = static_cast<int>(acc.own_sentences.size());
    int other_side = static_cast<int>(acc.other_sentences.size());
    if (std::min(own_side, other_side) < params.m) continue;
    const std::string& other_id = index.doc_id(other_doc);
    DocumentPair pair;
    pair.overlap_size = std::min(own_side, other_side);
    pair.shared_fingerprints = OverlapCount{static_cast<int>(acc.hashes.size())};
    if (doc.doc_id < other_id) {
      pair.doc_a = doc.doc_id;
      pair.doc_b = other_id;
      pair.sentences_a.assign(acc.own_sentences.begin(), acc.own_sentences.end());
      pair.sentences_b.assign(acc.other_sentences.begin(), acc.other_sentences.end());
    } else {
      pair.doc_a = other_id;
      pair.doc_b = doc.doc_id;
      pair.sentences_a.assign(acc.other_sentences.begin(), acc.other_sentences.end());
      pair.sentences_b.assign(acc.own_sentences.begin(), acc.own_sentences.end());
    }
    pairs.push_back(std::move(pair));
  }
  std::sort(pairs.begin(), pairs.end(), [](const DocumentPair& a, const DocumentPair& b) {
    return std::tie(a.doc_a, a.doc_b) < std::tie(b.doc_a, b.doc_b);
  });
  return pairs;
}

}  // namespace overlap
