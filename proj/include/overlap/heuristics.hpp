#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "overlap/corpus.hpp"
#include "overlap/similarity.hpp"

namespace overlap {

/// Undirected co-appearance graph over canonical author names. Collaboration
/// documents contribute no edges.
class CoauthorGraph {
 public:
  void add_document(const Document& doc);
  bool neighbors(std::string_view a, std::string_view b) const;
  std::size_t author_count() const { return adjacency_.size(); }
  std::size_t edge_count() const;

  const std::map<std::string, std::set<std::string>, std::less<>>& adjacency() const {
    return adjacency_;
  }

 private:
  std::map<std::string, std::set<std::string>, std::less<>> adjacency_;
};

CoauthorGraph build_coauthor_graph(std::span<const Document> docs);

/// False-positive indications. MentionedAndCollaboration is derived so the
/// flag set can never contradict its parts.
struct PairFlags {
  bool coauthor = false;       // rule 1
  bool referenced = false;     // rule 2
  bool mentioned = false;      // rule 3
  bool collaboration = false;  // rule 4

  bool mentioned_and_collaboration() const { return mentioned && collaboration; }
  bool any() const { return coauthor || referenced || mentioned || collaboration; }

  bool operator==(const PairFlags&) const = default;
};

enum class PairClass { SelfReuse, Discarded, Secondary, Primary };

std::string_view to_string(PairClass cls);

struct PairVerdict {
  DocumentPair pair;
  PairFlags flags;
  PairClass cls = PairClass::Primary;
};

/// Documents addressable by id; values must outlive the map.
using DocumentMap = std::map<std::string, const Document*, std::less<>>;

DocumentMap make_document_map(std::span<const Document> docs);

/// Classifies one pair:
///   SelfReuse  — the documents share an author;
///   Discarded  — flagged by rule 1 (coauthor) or rule 5 (mentioned and
///                collaboration);
///   Secondary  — flagged only by some combination of rules 2, 3, 4;
///   Primary    — no flags.
/// Referenced and Mentioned scan both directions. Mentioned matches the
/// author's surname on word boundaries (full name when the surname is
/// shorter than 4 characters).
PairVerdict flag_pair(const DocumentPair& pair, const DocumentMap& docs,
                      const CoauthorGraph& graph);

struct RuleImpact {
  std::size_t affected = 0;
  double percent = 0.0;  // of candidate (non-shared-authorship) pairs
};

struct Classification {
  std::vector<PairVerdict> primary;
  std::vector<PairVerdict> secondary;
  std::vector<PairVerdict> discarded;
  std::vector<PairVerdict> self_reuse;
  std::array<RuleImpact, 5> impact;  // rules 1..5
  std::size_t candidate_count = 0;   // pairs with non-overlapping authorship
};

/// Partitions all pairs into the four classes and reports per-rule impact
/// over the candidate pairs.
Classification classify_all(std::span<const DocumentPair> pairs,
                            const DocumentMap& docs, const CoauthorGraph& graph);

}  // namespace overlap
