#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "overlap/heuristics.hpp"
#include "overlap/index.hpp"

namespace overlap {

/// Sorts by overlap size descending, ties by (doc_a, doc_b). The result is a
/// permutation of the input.
std::vector<PairVerdict> rank_pairs(std::vector<PairVerdict> verdicts);

/// One row of the common k-gram frequency table. Counts are fingerprint
/// based and so can underestimate true totals.
struct CommonGramStat {
  std::vector<std::string> gram_tokens;
  std::size_t document_count = 0;    // distinct documents
  std::size_t author_count = 0;      // distinct author-set signatures
  std::size_t occurrence_count = 0;  // total postings
};

/// Top n common k-grams by document count (ties by occurrence count, then
/// gram text). Requires collect_common_gram_text to have run when the index
/// holds common hashes.
std::vector<CommonGramStat> top_common_grams(const FingerprintIndex& index,
                                             std::size_t n);

/// The overlap graph: one node per document appearing in a primary or
/// secondary pair, one edge per such pair. Node labels are unique within an
/// export; with anonymization they become short codes assigned
/// deterministically — sources lettered from A upward, copies from Z
/// downward — where direction is decided by earlier submission date.
struct OverlapGraph {
  enum class Tier { Primary, Secondary };
  struct Node {
    std::string doc_id;
    std::string label;
  };
  struct Edge {
    std::string doc_a;
    std::string doc_b;
    int overlap_size = 0;
    Tier tier = Tier::Primary;
  };
  std::vector<Node> nodes;  // in label-assignment order
  std::vector<Edge> edges;  // sorted by (doc_a, doc_b)
};

/// Assembles the graph from verdicts, dropping discarded and self-reuse
/// pairs. `dates` maps doc_id to an ISO date and may omit entries.
OverlapGraph build_overlap_graph(std::span<const PairVerdict> verdicts,
                                 bool anonymize,
                                 const std::map<std::string, std::string>& dates = {});

/// Renders the overlap graph as undirected Graphviz DOT: primary-tier edges
/// black, secondary grey, edge label = overlap size.
std::string export_graph(std::span<const PairVerdict> verdicts, bool anonymize,
                         const std::map<std::string, std::string>& dates = {});

enum class ReportFormat { Tabular, Jsonl };

/// Writes one record per verdict with fields doc_a, doc_b, overlap, class,
/// flags, sentences_a, sentences_b. Tabular output is aligned text with a
/// header row; Jsonl is one JSON object per line. Output bytes are a pure
/// function of the input.
void emit_pair_report(std::span<const PairVerdict> verdicts, ReportFormat format,
                      std::ostream& out);

/// Reads back a Jsonl pair report (sentence ordinals, class and flags
/// included). Throws DataError on malformed records.
std::vector<PairVerdict> read_pair_report_jsonl(std::istream& in);

/// Five-row rule impact table in the style of the detection summary:
/// affected pair counts and their percentage of candidate pairs.
std::string format_impact_table(const Classification& classification);

}  // namespace overlap
