#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "overlap/corpus.hpp"
#include "overlap/error.hpp"
#include "overlap/heuristics.hpp"
#include "overlap/index.hpp"
#include "overlap/oracle.hpp"
#include "overlap/report.hpp"
#include "overlap/similarity.hpp"
#include "overlap/winnow.hpp"

namespace fs = std::filesystem;
using namespace overlap;

namespace {

struct Config {
  int k = 7;
  int t = 12;
  int m = 4;
  int L = 4;
  std::string corpus_path = ".";
  std::string index_path = "corpus.fpidx";
  std::string output_dir = "reports";
  long posting_cap = -1;
  unsigned jobs = 0;
  bool anonymize = false;
  bool verify_flag = false;
  bool verify_matches = false;
};

void write_text_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("failed writing " + path.string());
}

SimilarityParams similarity_params(const Config& cfg, const FingerprintIndex& index) {
  SimilarityParams sp = SimilarityParams::for_index(index.params(), cfg.L, cfg.m);
  sp.posting_cap = cfg.posting_cap;
  return sp;
}

int cmd_index(const Config& cfg) {
  WinnowParams params{cfg.k, cfg.t};
  params.validate();

  CorpusLoad corpus = load_corpus(cfg.corpus_path, cfg.jobs);
  for (const SkippedFile& skip : corpus.skipped) {
    std::cerr << "skipped " << skip.doc_id << ": " << skip.reason << "\n";
  }

  FingerprintIndex index = FingerprintIndex::build(corpus.documents, params, cfg.jobs);
  index.mark_common(cfg.L);
  index.collect_common_gram_text(corpus.documents);
  save_index(index, cfg.index_path);

  std::size_t sentence_count = 0;
  for (const Document& d : corpus.documents) sentence_count += d.sentences.size();
  double avg = corpus.documents.empty()
                   ? 0.0
                   : static_cast<double>(index.posting_count()) /
                         static_cast<double>(corpus.documents.size());

  std::cout << "documents indexed: " << corpus.documents.size()
            << " (skipped: " << corpus.skipped.size() << ")\n"
            << "sentences: " << sentence_count << "\n"
            << "fingerprints entered: " << index.posting_count()
            << " (avg " << static_cast<long>(avg) << " per document)\n"
            << "distinct hashes: " << index.entries().size() << "\n"
            << "common hashes (L=" << cfg.L << "): " << index.common_hashes().size()
            << "\n"
            << "index written: " << cfg.index_path << " ("
            << fs::file_size(cfg.index_path) << " bytes)\n";
  return 0;
}

int cmd_detect(const Config& cfg) {
  FingerprintIndex index = load_index(cfg.index_path);
  if (index.marked_L() != cfg.L) index.mark_common(cfg.L);

  CorpusLoad corpus = load_corpus(cfg.corpus_path, cfg.jobs);
  SimilarityParams sp = similarity_params(cfg, index);

  std::vector<SentenceMatch> matches = find_sentence_matches(index, sp, cfg.jobs);
  if (cfg.verify_matches) matches = verify_matches(index, matches, corpus.documents);
  std::vector<DocumentPair> pairs = aggregate_pairs(index, matches, cfg.m);

  CoauthorGraph graph = build_coauthor_graph(corpus.documents);
  DocumentMap doc_map = make_document_map(corpus.documents);
  Classification cls = classify_all(pairs, doc_map, graph);

  fs::create_directories(cfg.output_dir);
  const auto write_class = [&](const char* name, const std::vector<PairVerdict>& v) {
    std::ofstream out(fs::path(cfg.output_dir) / name, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(std::string("cannot write report file ") + name);
    emit_pair_report(rank_pairs(v), ReportFormat::Tabular, out);
  };
  write_class("primary.txt", cls.primary);
  write_class("secondary.txt", cls.secondary);
  write_class("discarded.txt", cls.discarded);
  write_class("self_reuse.txt", cls.self_reuse);

  std::vector<PairVerdict> all;
  for (const auto* list : {&cls.primary, &cls.secondary, &cls.discarded, &cls.self_reuse}) {
    all.insert(all.end(), list->begin(), list->end());
  }
  all = rank_pairs(std::move(all));
  {
    std::ofstream out(fs::path(cfg.output_dir) / "pairs.jsonl",
                      std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write pairs.jsonl");
    emit_pair_report(all, ReportFormat::Jsonl, out);
  }
  std::string impact = format_impact_table(cls);
  write_text_file(fs::path(cfg.output_dir) / "impact.txt", impact);

  std::cout << "candidate pairs: " << pairs.size() << "\n"
            << "primary: " << cls.primary.size()
            << ", secondary: " << cls.secondary.size()
            << ", discarded: " << cls.discarded.size()
            << ", self-reuse: " << cls.self_reuse.size() << "\n"
            << impact << "reports written to " << cfg.output_dir << "\n";
  return 0;
}

int cmd_screen(const Config& cfg, const std::string& file,
               const std::vector<std::string>& authors, bool collaboration) {
  FingerprintIndex index = load_index(cfg.index_path);

  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read document: " + file);
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (!is_valid_utf8(raw)) throw DataError("document is not valid UTF-8: " + file);

  Document doc = make_document(fs::path(file).stem().string(), raw, authors,
                               collaboration);
  std::vector<DocumentPair> pairs =
      screen_document(doc, index, similarity_params(cfg, index));

  const auto join = [](const std::vector<std::uint32_t>& v) {
    std::string s;
    for (std::uint32_t o : v) {
      if (!s.empty()) s += ',';
      s += std::to_string(o);
    }
    return s;
  };
  std::vector<std::array<std::string, 5>> rows{
      {"doc_a", "doc_b", "overlap", "sentences_a", "sentences_b"}};
  for (const DocumentPair& pair : pairs) {
    rows.push_back({pair.doc_a, pair.doc_b, std::to_string(pair.overlap_size),
                    join(pair.sentences_a), join(pair.sentences_b)});
  }
  std::array<std::size_t, 5> widths{};
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::cout << row[c];
      if (c + 1 < row.size()) std::cout << std::string(widths[c] - row[c].size() + 2, ' ');
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_graph(const Config& cfg) {
  const fs::path pairs_path = fs::path(cfg.output_dir) / "pairs.jsonl";
  std::ifstream in(pairs_path);
  if (!in) throw DataError("missing detect output: " + pairs_path.string());
  std::vector<PairVerdict> verdicts = read_pair_report_jsonl(in);

  std::map<std::string, std::string> dates;
  try {
    dates = load_corpus_dates(cfg.corpus_path);
  } catch (const CorpusError&) {
    std::cerr << "note: no corpus metadata found; graph left undirected\n";
  }

  std::string dot = export_graph(verdicts, cfg.anonymize, dates);
  const fs::path dot_path = fs::path(cfg.output_dir) / "overlaps.dot";
  write_text_file(dot_path, dot);
  std::cout << "graph written: " << dot_path.string() << "\n";
  return 0;
}

int cmd_common_grams(const Config& cfg, std::size_t top_n) {
  FingerprintIndex index = load_index(cfg.index_path);
  std::vector<CommonGramStat> stats = top_common_grams(index, top_n);

  std::size_t gram_width = std::string("k-gram").size();
  std::vector<std::string> grams;
  for (const CommonGramStat& stat : stats) {
    std::string gram;
    for (const std::string& token : stat.gram_tokens) {
      if (!gram.empty()) gram += ' ';
      gram += token;
    }
    gram_width = std::max(gram_width, gram.size());
    grams.push_back(std::move(gram));
  }
  std::cout << "k-gram" << std::string(gram_width - 6 + 2, ' ')
            << "documents  authors  occurrences\n";
  for (std::size_t i = 0; i < stats.size(); ++i) {
    std::cout << grams[i] << std::string(gram_width - grams[i].size() + 2, ' ')
              << stats[i].document_count << "  " << stats[i].author_count << "  "
              << stats[i].occurrence_count << "\n";
  }
  return 0;
}

int cmd_oracle(const Config& cfg) {
  CorpusLoad corpus = load_corpus(cfg.corpus_path, cfg.jobs);
  OracleParams params{cfg.k, cfg.L, cfg.t, cfg.m};
  auto pairs = similar_documents(corpus.documents, params);
  for (const auto& [a, b] : pairs) std::cout << a << "\t" << b << "\n";
  std::cerr << pairs.size() << " similar pair(s)\n";
  return 0;
}

int cmd_verify(const Config& cfg) {
  std::string error;
  if (verify_index_file(cfg.index_path, &error)) {
    std::cout << cfg.index_path << ": OK\n";
    return 0;
  }
  std::cerr << cfg.index_path << ": " << error << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"corpus-scale text-overlap detection via sentence-restricted winnowing"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config");

  app.add_option("--k", cfg.k, "words per k-gram")->capture_default_str();
  app.add_option("--t", cfg.t, "guarantee threshold in words")->capture_default_str();
  app.add_option("--m", cfg.m, "minimum similar sentences per side")
      ->capture_default_str();
  app.add_option("--L", cfg.L, "commonness threshold (documents with disjoint authors)")
      ->capture_default_str();
  app.add_option("--corpus", cfg.corpus_path, "corpus directory")->capture_default_str();
  app.add_option("--index", cfg.index_path, "index file path")->capture_default_str();
  app.add_option("--out", cfg.output_dir, "output directory for reports")
      ->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)")
      ->capture_default_str();
  app.add_option("--posting-cap", cfg.posting_cap,
                 "document cap per posting list (-1 default 2*L*100, 0 off)")
      ->capture_default_str();
  app.add_flag("--anonymize", cfg.anonymize, "anonymize graph node labels");
  app.add_flag("--verify-matches", cfg.verify_matches,
               "re-check matches against raw token runs");

  auto* index_cmd = app.add_subcommand("index", "fingerprint a corpus and write the index");
  index_cmd->add_flag("--verify", cfg.verify_flag,
                      "verify the checksum of an existing index instead of building");

  app.add_subcommand("detect", "find, classify and report overlapping pairs");

  std::string screen_file;
  std::vector<std::string> screen_authors;
  bool screen_collab = false;
  auto* screen_cmd = app.add_subcommand("screen", "screen one document against the index");
  screen_cmd->add_option("file", screen_file, "document text file")->required();
  screen_cmd->add_option("--author", screen_authors, "author of the screened document");
  screen_cmd->add_flag("--collab", screen_collab, "screened document is a collaboration");

  app.add_subcommand("graph", "export the overlap graph from detect output");

  std::size_t top_n = 10;
  auto* grams_cmd = app.add_subcommand("common-grams", "print the most common k-grams");
  grams_cmd->add_option("--top", top_n, "rows to print")->capture_default_str();

  app.add_subcommand("oracle", "brute-force reference detection (small corpora)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand("index")) {
      return cfg.verify_flag ? cmd_verify(cfg) : cmd_index(cfg);
    }
    if (app.got_subcommand("detect")) return cmd_detect(cfg);
    if (app.got_subcommand("screen")) {
      return cmd_screen(cfg, screen_file, screen_authors, screen_collab);
    }
    if (app.got_subcommand("graph")) return cmd_graph(cfg);
    if (app.got_subcommand("common-grams")) return cmd_common_grams(cfg, top_n);
    if (app.got_subcommand("oracle")) return cmd_oracle(cfg);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
