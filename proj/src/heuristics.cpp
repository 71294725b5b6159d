#include "overlap/heuristics.hpp"

#include <algorithm>

#include "overlap/error.hpp"
#include "overlap/text.hpp"

namespace overlap {

void CoauthorGraph::add_document(const Document& doc) {
  if (doc.is_collaboration) return;  // no cliques from consortium papers
  for (std::size_t i = 0; i < doc.authors.size(); ++i) {
    for (std::size_t j = i + 1; j < doc.authors.size(); ++j) {
      const std::string& a = doc.authors[i].canonical_name;
      const std::string& b = doc.authors[j].canonical_name;
      if (a == b) continue;
      adjacency_[a].insert(b);
      adjacency_[b].insert(a);
    }
  }
}

bool CoauthorGraph::neighbors(std::string_view a, std::string_view b) const {
  auto it = adjacency_.find(a);
  if (it == adjacency_.end()) return false;
  return it->second.contains(std::string(b));
}

std::size_t CoauthorGraph::edge_count() const {
  std::size_t degree_sum = 0;
  for (const auto& [_, neighbors] : adjacency_) degree_sum += neighbors.size();
  return degree_sum / 2;
}

CoauthorGraph build_coauthor_graph(std::span<const Document> docs) {
  CoauthorGraph graph;
  for (const Document& doc : docs) graph.add_document(doc);
  return graph;
}

std::string_view to_string(PairClass cls) {
  switch (cls) {
    case PairClass::SelfReuse: return "self_reuse";
    case PairClass::Discarded: return "discarded";
    case PairClass::Secondary: return "secondary";
    case PairClass::Primary: return "primary";
  }
  return "primary";
}

DocumentMap make_document_map(std::span<const Document> docs) {
  DocumentMap map;
  for (const Document& doc : docs) map[doc.doc_id] = &doc;
  return map;
}

namespace {

// Word-boundary search text, padded so every token has a space on both sides.
struct SearchText {
  std::string body;
  std::string references;
};

SearchText make_search_text(const Document& doc) {
  return SearchText{" " + flatten_for_search(doc.body_text) + " ",
                    " " + flatten_for_search(doc.reference_text) + " "};
}

std::string_view surname_of(std::string_view canonical) {
  std::size_t pos = canonical.rfind(' ');
  return pos == std::string_view::npos ? canonical : canonical.substr(pos + 1);
}

bool any_author_in(const std::vector<AuthorRecord>& authors, std::string_view text) {
  for (const AuthorRecord& author : authors) {
    if (contains_word_sequence(text, author.canonical_name)) return true;
  }
  return false;
}

// Surname match, minimum length 4 to keep very short surnames from flooding;
// shorter ones fall back to the full canonical name.
bool any_author_mentioned(const std::vector<AuthorRecord>& authors,
                          std::string_view text) {
  for (const AuthorRecord& author : authors) {
    std::string_view surname = surname_of(author.canonical_name);
    std::string_view needle =
        surname.size() >= 4 ? surname : std::string_view(author.canonical_name);
    if (contains_word_sequence(text, needle)) return true;
  }
  return false;
}

bool share_author(const Document& a, const Document& b) {
  // Both author lists are sorted by canonical name.
  auto ia = a.authors.begin();
  auto ib = b.authors.begin();
  while (ia != a.authors.end() && ib != b.authors.end()) {
    if (ia->canonical_name == ib->canonical_name) return true;
    if (ia->canonical_name < ib->canonical_name) ++ia;
    else ++ib;
  }
  return false;
}

bool coauthor_linked(const Document& a, const Document& b, const CoauthorGraph& graph) {
  for (const AuthorRecord& x : a.authors) {
    for (const AuthorRecord& y : b.authors) {
      if (graph.neighbors(x.canonical_name, y.canonical_name)) return true;
    }
  }
  return false;
}

PairClass classify(bool self_reuse, const PairFlags& flags) {
  if (self_reuse) return PairClass::SelfReuse;
  if (flags.coauthor || flags.mentioned_and_collaboration()) return PairClass::Discarded;
  if (flags.referenced || flags.mentioned || flags.collaboration) {
    return PairClass::Secondary;
  }
  return PairClass::Primary;
}

PairVerdict flag_pair_impl(const DocumentPair& pair, const Document& a,
                           const Document& b, const SearchText& text_a,
                           const SearchText& text_b, const CoauthorGraph& graph) {
  PairFlags flags;
  flags.coauthor = coauthor_linked(a, b, graph);
  flags.referenced = any_author_in(a.authors, text_b.references) ||
                     any_author_in(b.authors, text_a.references);
  flags.mentioned = any_author_mentioned(a.authors, text_b.body) ||
                    any_author_mentioned(b.authors, text_a.body);
  flags.collaboration = a.is_collaboration || b.is_collaboration;
  return PairVerdict{pair, flags, classify(share_author(a, b), flags)};
}

const Document& resolve(const DocumentMap& docs, const std::string& doc_id) {
  auto it = docs.find(doc_id);
  if (it == docs.end()) throw DataError("unknown document in pair: " + doc_id);
  return *it->second;
}

}  // namespace

PairVerdict flag_pair(const DocumentPair& pair, const DocumentMap& docs,
                      const CoauthorGraph& graph) {
  const Document& a = resolve(docs, pair.doc_a);
  const Document& b = resolve(docs, pair.doc_b);
  return flag_pair_impl(pair, a, b, make_search_text(a), make_search_text(b), graph);
}

Classification classify_all(std::span<const DocumentPair> pairs,
                            const DocumentMap& docs, const CoauthorGraph& graph) {
  Classification result;

  // The flattened search text is reused across pairs touching the same doc.
  std::map<const Document*, SearchText> text_cache;
  const auto text_of = [&](const Document& doc) -> const SearchText& {
    auto it = text_cache.find(&doc);
    if (it == text_cache.end()) {
      it = text_cache.emplace(&doc, make_search_text(doc)).first;
    }
    return it->second;
  };

  for (const DocumentPair& pair : pairs) {
    const Document& a = resolve(docs, pair.doc_a);
    const Document& b = resolve(docs, pair.doc_b);
    PairVerdict verdict = flag_pair_impl(pair, a, b, text_of(a), text_of(b), graph);

    if (verdict.cls != PairClass::SelfReuse) {
      ++result.candidate_count;
      if (verdict.flags.coauthor) ++result.impact[0].affected;
      if (verdict.flags.referenced) ++result.impact[1].affected;
      if (verdict.flags.mentioned) ++result.impact[2].affected;
      if (verdict.flags.collaboration) ++result.impact[3].affected;
      if (verdict.flags.mentioned_and_collaboration()) ++result.impact[4].affected;
    }

    switch (verdict.cls) {
      case PairClass::SelfReuse: result.self_reuse.push_back(std::move(verdict)); break;
      case PairClass::Discarded: result.discarded.push_back(std::move(verdict)); break;
      case PairClass::Secondary: result.secondary.push_back(std::move(verdict)); break;
      case PairClass::Primary: result.primary.push_back(std::move(verdict)); break;
    }
  }

  for (RuleImpact& impact : result.impact) {
    impact.percent = result.candidate_count == 0
                         ? 0.0
                         : 100.0 * static_cast<double>(impact.affected) /
                               static_cast<double>(result.candidate_count);
  }
  return result;
}

}  // namespace overlap
