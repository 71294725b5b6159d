#include "overlap/index.hpp"

#include <fstream>
#include <random>

#include "doctest.h"
#include "overlap/oracle.hpp"
#include "support/synth.hpp"

using namespace overlap;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> run_tokens(const std::string& tag, int n) {
  std::vector<std::string> tokens;
  for (int i = 0; i < n; ++i) tokens.push_back(tag + std::to_string(i));
  return tokens;
}

std::string file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("build_index on empty and single-document corpora") {
  WinnowParams params;
  CHECK(FingerprintIndex::build({}, params).entries().empty());

  auto doc = synth::DocBuilder("solo").authors({"a b"}).unique_sentence(20).build();
  std::vector<Document> docs{doc};
  auto index = FingerprintIndex::build(docs, params);
  CHECK(index.documents().size() == 1);
  CHECK(!index.entries().empty());
  for (const auto& [hash, postings] : index.entries()) {
    for (const Posting& p : postings) CHECK(p.doc == 0);
  }
  CHECK(index.find_doc("solo") == 0);
  CHECK(!index.find_doc("nope").has_value());
}

TEST_CASE("identical documents under different ids double every posting list") {
  WinnowParams params;
  auto shared0 = run_tokens("s", 14);
  auto shared1 = run_tokens("u", 17);
  auto d1 = synth::DocBuilder("one").authors({"x"}).sentence(shared0).sentence(shared1).build();
  auto d2 = synth::DocBuilder("two").authors({"y"}).sentence(shared0).sentence(shared1).build();
  std::vector<Document> docs{d1, d2};
  auto index = FingerprintIndex::build(docs, params);
  for (const auto& [hash, postings] : index.entries()) {
    CHECK(postings.size() == 2);
    CHECK(postings[0].doc == 0);
    CHECK(postings[1].doc == 1);
    CHECK(postings[0].sentence == postings[1].sentence);
  }
}

TEST_CASE("build_index rejects duplicate doc ids") {
  WinnowParams params;
  auto d1 = synth::DocBuilder("same").authors({"x"}).unique_sentence(15).build();
  auto d2 = synth::DocBuilder("same").authors({"y"}).unique_sentence(15).build();
  std::vector<Document> docs{d1, d2};
  CHECK_THROWS_AS(FingerprintIndex::build(docs, params), IndexError);
}

TEST_CASE("posting lists are sorted, deduplicated, and account for every fingerprint") {
  WinnowParams params;
  std::mt19937_64 rng(21);
  auto docs = synth::random_corpus(rng, 12, 3, 8, 6, 25);
  // Plant one sentence twice within a document to exercise deduplication.
  docs[0].sentences.push_back(Sentence{
      static_cast<std::uint32_t>(docs[0].sentences.size()), docs[0].sentences[0].tokens});

  auto index = FingerprintIndex::build(docs, params, 3);
  std::size_t total = 0;
  for (const auto& [hash, postings] : index.entries()) {
    total += postings.size();
    for (std::size_t i = 1; i < postings.size(); ++i) {
      CHECK(postings[i - 1] < postings[i]);
    }
  }
  CHECK(total == index.posting_count());

  // Doc table is in doc_id order regardless of ingestion order.
  auto shuffled = docs;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto index2 = FingerprintIndex::build(shuffled, params, 2);
  CHECK(index.documents().size() == index2.documents().size());
  for (std::size_t i = 0; i < index.documents().size(); ++i) {
    CHECK(index.documents()[i] == index2.documents()[i]);
  }
  CHECK(index.entries().size() == index2.entries().size());
}

TEST_CASE("mark_common follows the disjoint-authorship rule") {
  WinnowParams params;
  auto boiler = run_tokens("boiler", 12);

  SUBCASE("four pairwise-disjoint author sets reach L=4") {
    std::vector<Document> docs;
    for (int i = 0; i < 4; ++i) {
      docs.push_back(synth::DocBuilder("d" + std::to_string(i))
                         .authors({"author x" + std::to_string(i)})
                         .sentence(boiler)
                         .unique_sentence(15)
                         .build());
    }
    auto index = FingerprintIndex::build(docs, params);
    auto& common = index.mark_common(4);
    CHECK(!common.empty());
    CHECK(index.marked_L() == 4);
    // Every hash of the boilerplate sentence is marked; unique ones are not.
    Sentence s{0, boiler};
    for (std::uint64_t h : kgram_hashes(s, params.k)) {
      if (index.entries().contains(h)) CHECK(index.is_common(h));
    }
    for (const auto& [hash, postings] : index.entries()) {
      if (postings.size() == 1) CHECK(!index.is_common(hash));
    }
  }

  SUBCASE("a shared author keeps the set at three and the hash uncommon") {
    std::vector<Document> docs;
    docs.push_back(synth::DocBuilder("d0").authors({"alice ahn"}).sentence(boiler).build());
    docs.push_back(synth::DocBuilder("d1").authors({"bob beck"}).sentence(boiler).build());
    docs.push_back(synth::DocBuilder("d2")
                       .authors({"alice ahn", "carol cole"})
                       .sentence(boiler)
                       .build());
    docs.push_back(synth::DocBuilder("d3").authors({"dan dole"}).sentence(boiler).build());

    // Exhaustive check: no four pairwise-disjoint documents exist.
    CHECK(exact_disjoint_authorship_count(docs) == 3);

    auto index = FingerprintIndex::build(docs, params);
    index.mark_common(4);
    CHECK(index.common_hashes().empty());
    index.mark_common(3);
    CHECK(!index.common_hashes().empty());
  }

  SUBCASE("a hash in one document is never common") {
    std::vector<Document> docs{
        synth::DocBuilder("only").authors({"solo writer"}).sentence(boiler).build()};
    auto index = FingerprintIndex::build(docs, params);
    index.mark_common(2);
    CHECK(index.common_hashes().empty());
  }
}

TEST_CASE("collaborations count as disjoint from everything") {
  WinnowParams params;
  auto boiler = run_tokens("collab", 13);
  std::vector<Document> docs;
  for (int i = 0; i < 3; ++i) {
    docs.push_back(synth::DocBuilder("c" + std::to_string(i))
                       .authors({"shared name"})  // same author everywhere
                       .collaboration()
                       .sentence(boiler)
                       .build());
  }
  docs.push_back(
      synth::DocBuilder("c9").authors({"shared name"}).sentence(boiler).build());
  auto index = FingerprintIndex::build(docs, params);
  index.mark_common(4);
  CHECK(!index.common_hashes().empty());
}

TEST_CASE("greedy marking is conservative against the exact optimum") {
  WinnowParams params;
  auto boiler = run_tokens("greedy", 12);
  // In doc_id order the first document blocks both others: greedy finds 1,
  // the optimum is 2. The hash must stay uncommon at L=2.
  std::vector<Document> docs;
  docs.push_back(synth::DocBuilder("a0").authors({"pat quinn", "ray soto"}).sentence(boiler).build());
  docs.push_back(synth::DocBuilder("a1").authors({"pat quinn"}).sentence(boiler).build());
  docs.push_back(synth::DocBuilder("a2").authors({"ray soto"}).sentence(boiler).build());
  CHECK(exact_disjoint_authorship_count(docs) == 2);

  auto index = FingerprintIndex::build(docs, params);
  index.mark_common(2);
  CHECK(index.common_hashes().empty());
}

TEST_CASE("mark_common is monotone in L and bounded by document count") {
  WinnowParams params;
  std::mt19937_64 rng(77);
  auto docs = synth::random_corpus(rng, 10, 2, 5, 8, 20);
  auto boiler = run_tokens("mono", 14);
  for (int i = 0; i < 6; ++i) {
    docs[i].sentences.push_back(
        Sentence{static_cast<std::uint32_t>(docs[i].sentences.size()), boiler});
  }
  auto index = FingerprintIndex::build(docs, params);
  auto common3 = index.mark_common(3);
  auto at3 = common3;
  auto common4 = index.mark_common(4);
  for (std::uint64_t h : common4) CHECK(at3.contains(h));

  for (std::uint64_t h : common4) {
    std::size_t distinct = 0;
    std::uint32_t last = UINT32_MAX;
    for (const Posting& p : index.entries().at(h)) {
      if (p.doc != last) {
        ++distinct;
        last = p.doc;
      }
    }
    CHECK(distinct >= 4);
  }
}

TEST_CASE("index round-trips bit-exactly through the file format") {
  WinnowParams params;
  std::mt19937_64 rng(31);
  auto docs = synth::random_corpus(rng, 9, 2, 6, 8, 22);
  auto boiler = run_tokens("persist", 12);
  for (int i = 0; i < 5; ++i) {
    docs[i].sentences.push_back(
        Sentence{static_cast<std::uint32_t>(docs[i].sentences.size()), boiler});
  }
  auto index = FingerprintIndex::build(docs, params);
  index.mark_common(4);
  index.collect_common_gram_text(docs);
  REQUIRE(!index.common_hashes().empty());
  REQUIRE(index.common_gram_tokens().size() == index.common_hashes().size());

  synth::TmpDir tmp("index_rt");
  const auto path1 = tmp.path() / "a.fpidx";
  const auto path2 = tmp.path() / "b.fpidx";
  save_index(index, path1);

  FingerprintIndex loaded = load_index(path1);
  CHECK(loaded.params() == index.params());
  CHECK(loaded.marked_L() == 4);
  CHECK(loaded.posting_count() == index.posting_count());
  CHECK(loaded.common_hashes() == index.common_hashes());
  CHECK(loaded.common_gram_tokens() == index.common_gram_tokens());
  CHECK(loaded.documents().size() == index.documents().size());

  save_index(loaded, path2);
  CHECK(file_bytes(path1) == file_bytes(path2));
  CHECK(verify_index_file(path1));
}

TEST_CASE("index loading rejects damaged files") {
  WinnowParams params;
  auto doc = synth::DocBuilder("x").authors({"a b"}).unique_sentence(16).build();
  std::vector<Document> docs{doc};
  auto index = FingerprintIndex::build(docs, params);

  synth::TmpDir tmp("index_bad");
  const auto path = tmp.path() / "x.fpidx";
  save_index(index, path);
  std::string good = file_bytes(path);

  const auto write_bytes = [&](std::string bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
  };

  SUBCASE("wrong magic") {
    std::string bad = good;
    bad[0] = 'Z';
    write_bytes(bad);
    CHECK_THROWS_AS(load_index(path), IndexError);
    std::string reason;
    CHECK(!verify_index_file(path, &reason));
    CHECK(reason == "bad magic");
  }
  SUBCASE("truncated") {
    write_bytes(good.substr(0, good.size() / 2));
    CHECK_THROWS_AS(load_index(path), IndexError);
  }
  SUBCASE("flipped payload byte fails the checksum") {
    std::string bad = good;
    bad[good.size() / 2] ^= 0x01;
    write_bytes(bad);
    CHECK_THROWS_AS(load_index(path), IndexError);
    std::string reason;
    CHECK(!verify_index_file(path, &reason));
    CHECK(reason == "checksum mismatch");
  }
  SUBCASE("unsupported version") {
    std::string bad = good;
    bad[4] = 99;  // version lives after the 4-byte magic
    // The checksum covers the version, so fix it up to reach the check.
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < bad.size() - 8; ++i) {
      h = (h ^ static_cast<unsigned char>(bad[i])) * 1099511628211ull;
    }
    for (int i = 0; i < 8; ++i) {
      bad[bad.size() - 8 + i] = static_cast<char>((h >> (8 * i)) & 0xFF);
    }
    write_bytes(bad);
    CHECK_THROWS_AS(load_index(path), IndexError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_index(tmp.path() / "absent.fpidx"), IndexError);
  }
}

TEST_CASE("disjoint count inserts an extra document at its id position") {
  WinnowParams params;
  auto boiler = run_tokens("extra", 12);
  std::vector<Document> docs;
  docs.push_back(synth::DocBuilder("m1").authors({"ana diaz"}).sentence(boiler).build());
  docs.push_back(synth::DocBuilder("m2").authors({"ben ford"}).sentence(boiler).build());
  auto index = FingerprintIndex::build(docs, params);
  std::vector<std::uint32_t> all{0, 1};

  CHECK(index.disjoint_authorship_count(all) == 2);

  // An early-sorting extra with both authors blocks the rest.
  FingerprintIndex::DocRecord blocker{"a0", {"ana diaz", "ben ford"}, false};
  CHECK(index.disjoint_authorship_count(all, &blocker) == 1);

  // The same record sorting last changes nothing for the first two.
  FingerprintIndex::DocRecord late{"z9", {"ana diaz", "ben ford"}, false};
  CHECK(index.disjoint_authorship_count(all, &late) == 2);

  FingerprintIndex::DocRecord fresh{"n5", {"cam hill"}, false};
  CHECK(index.disjoint_authorship_count(all, &fresh) == 3);
}
