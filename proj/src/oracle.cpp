#include "overlap/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace overlap {

namespace {

// Longest shared token run between two sentences (longest common substring
// over tokens, rolling-row DP).
int longest_common_run(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<int> prev(b.size() + 1, 0);
  std::vector<int> current(b.size() + 1, 0);
  int best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      current[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, current[j]);
    }
    std::swap(prev, current);
  }
  return best;
}

std::vector<const Document*> by_doc_id(std::span<const Document> docs) {
  std::vector<const Document*> ordered;
  ordered.reserve(docs.size());
  for (const Document& d : docs) ordered.push_back(&d);
  std::sort(ordered.begin(), ordered.end(),
            [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });
  return ordered;
}

std::set<std::string> author_set(const Document& doc) {
  std::set<std::string> names;
  for (const AuthorRecord& a : doc.authors) names.insert(a.canonical_name);
  return names;
}

// Exact maximum pairwise-disjoint subset by backtracking. Collaborations are
// disjoint from everything, so they count unconditionally.
int max_disjoint(const std::vector<std::set<std::string>>& sets) {
  int best = 0;
  std::set<std::string> used;
  const std::function<void(std::size_t, int)> recurse = [&](std::size_t i, int count) {
    best = std::max(best, count);
    if (i == sets.size()) return;
    if (count + static_cast<int>(sets.size() - i) <= best) return;  // prune
    bool disjoint = std::none_of(sets[i].begin(), sets[i].end(),
                                 [&](const std::string& a) { return used.contains(a); });
    if (disjoint) {
      used.insert(sets[i].begin(), sets[i].end());
      recurse(i + 1, count + 1);
      for (const std::string& a : sets[i]) used.erase(a);
    }
    recurse(i + 1, count);
  };
  recurse(0, 0);
  return best;
}

int exact_disjoint_count(const std::vector<const Document*>& docs) {
  int collaborations = 0;
  std::vector<std::set<std::string>> sets;
  for (const Document* d : docs) {
    if (d->is_collaboration) {
      ++collaborations;
    } else {
      sets.push_back(author_set(*d));
    }
  }
  return collaborations + max_disjoint(sets);
}

std::string join_run(std::span<const std::string> tokens) {
  std::string joined;
  for (const std::string& token : tokens) {
    if (!joined.empty()) joined.push_back('\x1f');
    joined += token;
  }
  return joined;
}

}  // namespace

int exact_disjoint_authorship_count(std::span<const Document> docs) {
  std::vector<const Document*> ptrs;
  ptrs.reserve(docs.size());
  for (const Document& d : docs) ptrs.push_back(&d);
  return exact_disjoint_count(ptrs);
}

std::vector<OracleMatch> nu_similar_sentences(std::span<const Document> docs, int nu) {
  if (nu < 1) throw std::invalid_argument("oracle: nu must be >= 1");
  const auto ordered = by_doc_id(docs);
  std::vector<OracleMatch> matches;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    for (std::size_t j = i + 1; j < ordered.size(); ++j) {
      for (const Sentence& sa : ordered[i]->sentences) {
        for (const Sentence& sb : ordered[j]->sentences) {
          int run = longest_common_run(sa.tokens, sb.tokens);
          if (run >= nu) {
            matches.push_back(OracleMatch{ordered[i]->doc_id, ordered[j]->doc_id,
                                          sa.ordinal, sb.ordinal, run});
          }
        }
      }
    }
  }
  return matches;
}

std::vector<std::pair<std::string, std::string>> similar_documents(
    std::span<const Document> docs, const OracleParams& params) {
  if (params.mu < 1 || params.nu < 1 || params.m < 1 || params.L < 1) {
    throw std::invalid_argument("oracle: parameters must be >= 1");
  }
  const auto ordered = by_doc_id(docs);

  // Every mu-word run in the corpus, with the documents carrying it.
  std::unordered_map<std::string, std::vector<std::uint32_t>> run_docs;
  for (std::uint32_t d = 0; d < ordered.size(); ++d) {
    for (const Sentence& sentence : ordered[d]->sentences) {
      if (sentence.tokens.size() < static_cast<std::size_t>(params.mu)) continue;
      for (std::size_t i = 0; i + params.mu <= sentence.tokens.size(); ++i) {
        auto& holders = run_docs[join_run(
            std::span<const std::string>(&sentence.tokens[i], params.mu))];
        if (holders.empty() || holders.back() != d) holders.push_back(d);
      }
    }
  }

  // L-common runs by the exact disjoint-authorship test (Def. 2.3).
  std::unordered_set<std::string> common_runs;
  for (const auto& [run, holders] : run_docs) {
    if (holders.size() < static_cast<std::size_t>(params.L)) continue;
    std::vector<const Document*> holder_docs;
    holder_docs.reserve(holders.size());
    for (std::uint32_t d : holders) holder_docs.push_back(ordered[d]);
    if (exact_disjoint_count(holder_docs) >= params.L) common_runs.insert(run);
  }

  // A sentence is (mu, L)-common when it contains any L-common run.
  const auto sentence_common = [&](const Sentence& sentence) {
    if (sentence.tokens.size() < static_cast<std::size_t>(params.mu)) return false;
    for (std::size_t i = 0; i + params.mu <= sentence.tokens.size(); ++i) {
      if (common_runs.contains(join_run(
              std::span<const std::string>(&sentence.tokens[i], params.mu)))) {
        return true;
      }
    }
    return false;
  };
  std::vector<std::vector<bool>> is_common(ordered.size());
  for (std::size_t d = 0; d < ordered.size(); ++d) {
    is_common[d].reserve(ordered[d]->sentences.size());
    for (const Sentence& sentence : ordered[d]->sentences) {
      is_common[d].push_back(sentence_common(sentence));
    }
  }

  // Both sides need m uncommon sentences nu-similar to the other document.
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    for (std::size_t j = i + 1; j < ordered.size(); ++j) {
      const auto count_side = [&](const Document& from, const std::vector<bool>& common,
                                  const Document& to) {
        int count = 0;
        for (const Sentence& sa : from.sentences) {
          if (common[sa.ordinal]) continue;
          for (const Sentence& sb : to.sentences) {
            if (longest_common_run(sa.tokens, sb.tokens) >= params.nu) {
              ++count;
              break;
            }
          }
        }
        return count;
      };
      int side_a = count_side(*ordered[i], is_common[i], *ordered[j]);
      if (side_a < params.m) continue;
      int side_b = count_side(*ordered[j], is_common[j], *ordered[i]);
      if (side_b < params.m) continue;
      pairs.emplace_back(ordered[i]->doc_id, ordered[j]->doc_id);
    }
  }
  return pairs;
}

}  // namespace overlap
