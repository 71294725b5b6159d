#include "overlap/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "overlap/error.hpp"

namespace overlap {

std::vector<PairVerdict> rank_pairs(std::vector<PairVerdict> verdicts) {
  std::sort(verdicts.begin(), verdicts.end(),
            [](const PairVerdict& a, const PairVerdict& b) {
              if (a.pair.overlap_size != b.pair.overlap_size) {
                return a.pair.overlap_size > b.pair.overlap_size;
              }
              if (a.pair.doc_a != b.pair.doc_a) return a.pair.doc_a < b.pair.doc_a;
              return a.pair.doc_b < b.pair.doc_b;
            });
  return verdicts;
}

std::vector<CommonGramStat> top_common_grams(const FingerprintIndex& index,
                                             std::size_t n) {
  if (!index.common_hashes().empty() && index.common_gram_tokens().empty()) {
    throw IndexError("common gram text not collected for this index");
  }

  std::vector<CommonGramStat> stats;
  std::set<std::string> signatures;
  for (const auto& [hash, tokens] : index.common_gram_tokens()) {
    const auto& postings = index.entries().at(hash);
    CommonGramStat stat;
    stat.gram_tokens = tokens;
    stat.occurrence_count = postings.size();
    signatures.clear();
    std::uint32_t last_doc = 0;
    bool first = true;
    for (const Posting& p : postings) {
      if (!first && p.doc == last_doc) continue;
      first = false;
      last_doc = p.doc;
      ++stat.document_count;
      const auto& record = index.documents()[p.doc];
      if (record.collaboration) {
        signatures.insert("\x01" + record.doc_id);
      } else {
        std::string sig;
        for (const auto& a : record.authors) {
          sig += a;
          sig += '\x1f';
        }
        signatures.insert(std::move(sig));
      }
    }
    stat.author_count = signatures.size();
    stats.push_back(std::move(stat));
  }

  std::sort(stats.begin(), stats.end(),
            [](const CommonGramStat& a, const CommonGramStat& b) {
              if (a.document_count != b.document_count)
                return a.document_count > b.document_count;
              if (a.occurrence_count != b.occurrence_count)
                return a.occurrence_count > b.occurrence_count;
              return a.gram_tokens < b.gram_tokens;
            });
  if (stats.size() > n) stats.resize(n);
  return stats;
}

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string join_ordinals(const std::vector<std::uint32_t>& ordinals) {
  std::string out;
  for (std::uint32_t o : ordinals) {
    if (!out.empty()) out += ',';
    out += std::to_string(o);
  }
  return out;
}

std::vector<std::string> flag_names(const PairFlags& flags) {
  std::vector<std::string> names;
  if (flags.coauthor) names.emplace_back("coauthor");
  if (flags.referenced) names.emplace_back("referenced");
  if (flags.mentioned) names.emplace_back("mentioned");
  if (flags.collaboration) names.emplace_back("collaboration");
  if (flags.mentioned_and_collaboration())
    names.emplace_back("mentioned_and_collaboration");
  return names;
}

std::string join_flags(const PairFlags& flags) {
  auto names = flag_names(flags);
  if (names.empty()) return "-";
  std::string out;
  for (const auto& name : names) {
    if (!out.empty()) out += '+';
    out += name;
  }
  return out;
}

PairClass class_from_string(std::string_view s) {
  if (s == "self_reuse") return PairClass::SelfReuse;
  if (s == "discarded") return PairClass::Discarded;
  if (s == "secondary") return PairClass::Secondary;
  if (s == "primary") return PairClass::Primary;
  throw DataError("unknown pair class: " + std::string(s));
}

}  // namespace

OverlapGraph build_overlap_graph(std::span<const PairVerdict> verdicts,
                                 bool anonymize,
                                 const std::map<std::string, std::string>& dates) {
  OverlapGraph graph;
  std::set<std::string> nodes;
  std::set<std::string> copies;  // later-dated side of a directed edge

  for (const PairVerdict& v : verdicts) {
    if (v.cls != PairClass::Primary && v.cls != PairClass::Secondary) continue;
    graph.edges.push_back(OverlapGraph::Edge{
        v.pair.doc_a, v.pair.doc_b, v.pair.overlap_size,
        v.cls == PairClass::Primary ? OverlapGraph::Tier::Primary
                                    : OverlapGraph::Tier::Secondary});
    nodes.insert(v.pair.doc_a);
    nodes.insert(v.pair.doc_b);
    auto date_a = dates.find(v.pair.doc_a);
    auto date_b = dates.find(v.pair.doc_b);
    if (date_a != dates.end() && date_b != dates.end() &&
        date_a->second != date_b->second) {
      // ISO dates order lexicographically; the later document is the copy.
      copies.insert(date_a->second < date_b->second ? v.pair.doc_b : v.pair.doc_a);
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end(),
            [](const OverlapGraph::Edge& a, const OverlapGraph::Edge& b) {
              return std::tie(a.doc_a, a.doc_b) < std::tie(b.doc_a, b.doc_b);
            });

  if (!anonymize) {
    for (const std::string& node : nodes) graph.nodes.push_back({node, node});
    return graph;
  }

  // Sources letter from A upward and copies from Z downward; suffixed codes
  // when one alphabet cannot hold them all.
  std::vector<std::string> sources;
  std::vector<std::string> copy_list;
  for (const std::string& node : nodes) {
    (copies.contains(node) ? copy_list : sources).push_back(node);
  }
  const bool fits = nodes.size() <= 26;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    graph.nodes.push_back({sources[i],
                           fits ? std::string(1, static_cast<char>('A' + i))
                                : "S" + std::to_string(i + 1)});
  }
  for (std::size_t i = 0; i < copy_list.size(); ++i) {
    graph.nodes.push_back({copy_list[i],
                           fits ? std::string(1, static_cast<char>('Z' - i))
                                : "C" + std::to_string(i + 1)});
  }
  return graph;
}

std::string export_graph(std::span<const PairVerdict> verdicts, bool anonymize,
                         const std::map<std::string, std::string>& dates) {
  const OverlapGraph graph = build_overlap_graph(verdicts, anonymize, dates);
  std::map<std::string, std::string> label_of;
  for (const auto& node : graph.nodes) label_of[node.doc_id] = node.label;

  std::ostringstream out;
  out << "graph overlaps {\n";
  for (const auto& node : graph.nodes) {
    out << "  \"" << dot_escape(node.label) << "\";\n";
  }
  for (const auto& edge : graph.edges) {
    out << "  \"" << dot_escape(label_of.at(edge.doc_a)) << "\" -- \""
        << dot_escape(label_of.at(edge.doc_b)) << "\" [label=\""
        << edge.overlap_size << "\", color=\""
        << (edge.tier == OverlapGraph::Tier::Primary ? "black" : "grey")
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

void emit_pair_report(std::span<const PairVerdict> verdicts, ReportFormat format,
                      std::ostream& out) {
  if (format == ReportFormat::Jsonl) {
    for (const PairVerdict& v : verdicts) {
      nlohmann::ordered_json record;
      record["doc_a"] = v.pair.doc_a;
      record["doc_b"] = v.pair.doc_b;
      record["overlap"] = v.pair.overlap_size;
      record["class"] = std::string(to_string(v.cls));
      record["flags"] = flag_names(v.flags);
      record["sentences_a"] = v.pair.sentences_a;
      record["sentences_b"] = v.pair.sentences_b;
      out << record.dump() << '\n';
    }
    return;
  }

  const std::array<std::string, 7> header = {"doc_a",       "doc_b", "overlap",
                                             "class",       "flags", "sentences_a",
                                             "sentences_b"};
  std::vector<std::array<std::string, 7>> rows;
  rows.reserve(verdicts.size());
  for (const PairVerdict& v : verdicts) {
    rows.push_back({v.pair.doc_a, v.pair.doc_b, std::to_string(v.pair.overlap_size),
                    std::string(to_string(v.cls)), join_flags(v.flags),
                    join_ordinals(v.pair.sentences_a),
                    join_ordinals(v.pair.sentences_b)});
  }
  std::array<std::size_t, 7> widths;
  for (std::size_t c = 0; c < 7; ++c) {
    widths[c] = header[c].size();
    for (const auto& row : rows) widths[c] = std::max(widths[c], row[c].size());
  }
  const auto emit_row = [&](const std::array<std::string, 7>& row) {
    for (std::size_t c = 0; c < 7; ++c) {
      out << row[c];
      if (c + 1 < 7) out << std::string(widths[c] - row[c].size() + 2, ' ');
    }
    out << '\n';
  };
  emit_row(header);
  for (const auto& row : rows) emit_row(row);
}

std::vector<PairVerdict> read_pair_report_jsonl(std::istream& in) {
  std::vector<PairVerdict> verdicts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
      PairVerdict v;
      v.pair.doc_a = record.at("doc_a").get<std::string>();
      v.pair.doc_b = record.at("doc_b").get<std::string>();
      v.pair.overlap_size = record.at("overlap").get<int>();
      v.cls = class_from_string(record.at("class").get<std::string>());
      for (const auto& flag : record.at("flags")) {
        std::string name = flag.get<std::string>();
        if (name == "coauthor") v.flags.coauthor = true;
        else if (name == "referenced") v.flags.referenced = true;
        else if (name == "mentioned") v.flags.mentioned = true;
        else if (name == "collaboration") v.flags.collaboration = true;
        // mentioned_and_collaboration is derived from the two flags
      }
      v.pair.sentences_a = record.at("sentences_a").get<std::vector<std::uint32_t>>();
      v.pair.sentences_b = record.at("sentences_b").get<std::vector<std::uint32_t>>();
      verdicts.push_back(std::move(v));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("pair report line " + std::to_string(line_no) +
                      ": malformed record: " + e.what());
    }
  }
  return verdicts;
}

std::string format_impact_table(const Classification& classification) {
  static constexpr std::string_view kRuleNames[5] = {
      "1. coauthor", "2. referenced", "3. mentioned", "4. collaboration",
      "5. mentioned & collaboration"};
  std::ostringstream out;
  out << "heuristic                     affected    impact\n";
  for (std::size_t i = 0; i < 5; ++i) {
    char row[96];
    std::snprintf(row, sizeof(row), "%-28s %9zu %8.1f%%\n",
                  std::string(kRuleNames[i]).c_str(),
                  classification.impact[i].affected,
                  classification.impact[i].percent);
    out << row;
  }
  out << "candidate pairs with non-overlapping authorship: "
      << classification.candidate_count << '\n';
  return out.str();
}

}  // namespace overlap
