#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "overlap/corpus.hpp"

namespace overlap {

/// Brute-force reference implementation of the similarity definitions, used
/// to certify the fingerprint pipeline on small corpora. Hash-free: every
/// result rests on direct token comparison.

struct OracleMatch {
  std::string doc_a;  // doc_a < doc_b
  std::string doc_b;
  std::uint32_t sentence_a = 0;
  std::uint32_t sentence_b = 0;
  int run_length = 0;  // longest shared run, in words (>= nu)

  friend bool operator==(const OracleMatch&, const OracleMatch&) = default;
};

/// Every cross-document sentence pair sharing a run of at least nu
/// consecutive words, by exhaustive scan.
std::vector<OracleMatch> nu_similar_sentences(std::span<const Document> docs, int nu);

struct OracleParams {
  int mu = 7;
  int L = 4;
  int nu = 12;
  int m = 4;
};

/// Document pairs similar per the full criterion, applied literally:
/// L-common mu-word runs found by exhaustive enumeration with an exact
/// (backtracking) disjoint-authorship test, their sentences excluded, then
/// m nu-similar uncommon sentences required on each side. Pairs are
/// (doc_a, doc_b) with doc_a < doc_b, sorted.
std::vector<std::pair<std::string, std::string>> similar_documents(
    std::span<const Document> docs, const OracleParams& params);

/// Exact maximum number of pairwise author-disjoint documents among the
/// given documents (collaborations count as disjoint from everything).
/// Exposed for tests that compare the greedy rule against the optimum.
int exact_disjoint_authorship_count(std::span<const Document> docs);

}  // namespace overlap
