#include "overlap/winnow.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_set>

#include "doctest.h"
#include "support/synth.hpp"

using namespace overlap;

namespace {

Sentence make_sentence(std::vector<std::string> tokens, std::uint32_t ordinal = 0) {
  return Sentence{ordinal, std::move(tokens)};
}

std::vector<std::string> numbered_tokens(int n, const std::string& prefix = "tok") {
  std::vector<std::string> tokens;
  for (int i = 0; i < n; ++i) tokens.push_back(prefix + std::to_string(i));
  return tokens;
}

// Independent FNV-1a over the joined byte string, written separately from
// hash_kgram.
std::uint64_t reference_hash(const std::vector<std::string>& tokens, std::size_t begin,
                             int k) {
  std::string joined;
  for (int i = 0; i < k; ++i) {
    if (i) joined += '\x1f';
    joined += tokens[begin + i];
  }
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : joined) {
    h = (h ^ c) * 1099511628211ull;
  }
  return h;
}

// Brute-force winnow: rightmost minimum of every window, deduplicated by
// position. Used as the selection oracle.
std::set<std::pair<std::uint64_t, std::uint32_t>> reference_select(
    const std::vector<std::uint64_t>& hashes, int w) {
  std::set<std::pair<std::uint64_t, std::uint32_t>> picked;
  if (hashes.empty()) return picked;
  if (hashes.size() < static_cast<std::size_t>(w)) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < hashes.size(); ++i) {
      if (hashes[i] <= hashes[best]) best = i;
    }
    picked.insert({hashes[best], static_cast<std::uint32_t>(best)});
    return picked;
  }
  for (std::size_t start = 0; start + w <= hashes.size(); ++start) {
    std::size_t best = start + w - 1;
    for (std::size_t i = start + w; i-- > start;) {
      if (hashes[i] < hashes[best]) best = i;
    }
    picked.insert({hashes[best], static_cast<std::uint32_t>(best)});
  }
  return picked;
}

std::mt19937_64 seeded(std::uint64_t seed) { return std::mt19937_64(seed); }

std::vector<std::string> random_tokens(std::mt19937_64& rng, int n,
                                       int vocabulary = 50) {
  std::uniform_int_distribution<int> pick(0, vocabulary - 1);
  std::vector<std::string> tokens;
  for (int i = 0; i < n; ++i) tokens.push_back("v" + std::to_string(pick(rng)));
  return tokens;
}

}  // namespace

TEST_CASE("winnow parameters validate and derive the window") {
  WinnowParams defaults;
  CHECK(defaults.k == 7);
  CHECK(defaults.t == 12);
  CHECK(defaults.window() == 6);
  CHECK_NOTHROW(defaults.validate());

  CHECK_THROWS_AS((WinnowParams{0, 12}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((WinnowParams{7, 6}.validate()), std::invalid_argument);
  CHECK_NOTHROW((WinnowParams{1, 1}.validate()));
}

TEST_CASE("kgram_hashes counts and position independence") {
  CHECK(kgram_hashes(make_sentence(numbered_tokens(7)), 7).size() == 1);
  CHECK(kgram_hashes(make_sentence(numbered_tokens(6)), 7).empty());
  CHECK(kgram_hashes(make_sentence({}), 7).empty());

  auto sentence = make_sentence(numbered_tokens(20));
  auto hashes = kgram_hashes(sentence, 7);
  REQUIRE(hashes.size() == 14);
  for (std::size_t i = 0; i < hashes.size(); ++i) {
    CHECK(hashes[i] == reference_hash(sentence.tokens, i, 7));
  }

  // Equal runs at different positions hash equally.
  std::vector<std::string> repeated;
  auto run = numbered_tokens(7, "r");
  repeated.insert(repeated.end(), run.begin(), run.end());
  repeated.push_back("gap0");
  repeated.insert(repeated.end(), run.begin(), run.end());
  auto rep_hashes = kgram_hashes(make_sentence(repeated), 7);
  CHECK(rep_hashes.front() == rep_hashes[8]);
}

TEST_CASE("hash_kgram depends on token content, not slicing") {
  std::vector<std::string> a = {"alpha", "beta"};
  std::vector<std::string> b = {"alph", "abeta"};  // same bytes, different split
  CHECK(hash_kgram(a) != hash_kgram(b));
}

TEST_CASE("winnow_sentence window arithmetic from the parameter defaults") {
  WinnowParams params;

  // Exactly t tokens: one window, one fingerprint.
  auto exact = winnow_sentence(make_sentence(numbered_tokens(12)), params);
  CHECK(exact.size() == 1);

  // Fewer hashes than the window: the single minimum survives.
  auto sentence8 = make_sentence(numbered_tokens(8));
  auto short_case = winnow_sentence(sentence8, params);
  auto hashes8 = kgram_hashes(sentence8, params.k);
  REQUIRE(hashes8.size() == 2);
  REQUIRE(short_case.size() == 1);
  CHECK(short_case[0].hash == std::min(hashes8[0], hashes8[1]));

  CHECK(winnow_sentence(make_sentence(numbered_tokens(6)), params).empty());
  CHECK(winnow_sentence(make_sentence({}), params).empty());
}

TEST_CASE("winnow_sentence covers every window and stays within bounds") {
  WinnowParams params;
  auto sentence = make_sentence(numbered_tokens(25));
  auto hashes = kgram_hashes(sentence, params.k);
  REQUIRE(hashes.size() == 19);

  auto selected = winnow_sentence(sentence, params);
  CHECK(selected.size() <= 14);  // g - w + 1 windows
  CHECK(selected.size() >= 1);

  std::set<std::uint32_t> positions;
  for (const Fingerprint& fp : selected) {
    CHECK(fp.token_offset + params.k <= sentence.tokens.size());
    CHECK(fp.hash == hashes[fp.token_offset]);
    positions.insert(fp.token_offset);
  }
  // Every window of w consecutive hashes holds a selected position.
  for (std::size_t start = 0; start + params.window() <= hashes.size(); ++start) {
    bool covered = false;
    for (std::uint32_t p : positions) {
      if (p >= start && p < start + params.window()) covered = true;
    }
    CHECK(covered);
  }
}

TEST_CASE("winnow_sentence equals the brute-force selector on random input") {
  WinnowParams params;
  auto rng = seeded(1234);
  std::uniform_int_distribution<int> len(0, 60);
  for (int iter = 0; iter < 400; ++iter) {
    auto sentence = make_sentence(random_tokens(rng, len(rng), 12));
    auto hashes = kgram_hashes(sentence, params.k);
    auto expected = reference_select(hashes, params.window());
    auto got = winnow_sentence(sentence, params);
    std::set<std::pair<std::uint64_t, std::uint32_t>> got_set;
    for (const Fingerprint& fp : got) got_set.insert({fp.hash, fp.token_offset});
    CHECK(got_set.size() == got.size());  // no duplicate emissions
    CHECK(got_set == expected);
    if (hashes.size() >= static_cast<std::size_t>(params.window())) {
      CHECK(got.size() <= hashes.size() - params.window() + 1);
      CHECK(got.size() >= 1);
    }
  }
}

TEST_CASE("fingerprint_document ignores short sentences and keeps locality") {
  WinnowParams params;
  auto all_short = synth::DocBuilder("shorty")
                       .authors({"a b"})
                       .sentence(numbered_tokens(6))
                       .sentence(numbered_tokens(3))
                       .build();
  CHECK(fingerprint_document(all_short, params).empty());

  // Identical sentences yield identical hash multisets in any surroundings.
  auto shared = numbered_tokens(15, "shared");
  auto doc1 = synth::DocBuilder("doc1").authors({"x"}).sentence(shared).build();
  auto doc2 = synth::DocBuilder("doc2")
                  .authors({"y"})
                  .unique_sentence(20)
                  .sentence(shared)
                  .unique_sentence(14)
                  .build();
  auto fp1 = fingerprint_document(doc1, params);
  auto fp2 = fingerprint_document(doc2, params);
  std::multiset<std::uint64_t> h1;
  for (const auto& fp : fp1) h1.insert(fp.hash);
  std::multiset<std::uint64_t> from_shared;
  for (const auto& fp : fp2) {
    if (fp.sentence_ordinal == 1) from_shared.insert(fp.hash);
  }
  CHECK(h1 == from_shared);
}

TEST_CASE("documents sharing a guaranteed-length sentence share a fingerprint") {
  WinnowParams params;
  auto shared = numbered_tokens(12, "g");
  auto a = synth::DocBuilder("a").sentence(shared).unique_sentence(18).build();
  auto b = synth::DocBuilder("b").unique_sentence(16).sentence(shared).build();
  std::unordered_set<std::uint64_t> hashes_a;
  for (const auto& fp : fingerprint_document(a, params)) hashes_a.insert(fp.hash);
  bool found = false;
  for (const auto& fp : fingerprint_document(b, params)) {
    if (hashes_a.contains(fp.hash)) found = true;
  }
  CHECK(found);
}

TEST_CASE("an edit splits a long run but the guaranteed side still matches") {
  WinnowParams params;
  auto original = numbered_tokens(25, "e");
  auto edited = original;
  edited[14] = "changedword";  // leaves e0..e13 intact: 14 >= t words

  auto a = synth::DocBuilder("a").sentence(original).build();
  auto b = synth::DocBuilder("b").sentence(edited).build();
  std::unordered_set<std::uint64_t> hashes_a;
  for (const auto& fp : fingerprint_document(a, params)) hashes_a.insert(fp.hash);
  bool shared_on_unedited_side = false;
  for (const auto& fp : fingerprint_document(b, params)) {
    if (hashes_a.contains(fp.hash) && fp.token_offset + params.k <= 14) {
      shared_on_unedited_side = true;
    }
  }
  CHECK(shared_on_unedited_side);
}

TEST_CASE("randomized guarantee and no-short-match properties") {
  WinnowParams params;
  auto rng = seeded(99);
  std::uniform_int_distribution<int> fill(8, 20);

  for (int iter = 0; iter < 200; ++iter) {
    std::string tag = std::to_string(iter);
    // An injected 12-word run inside otherwise disjoint sentences.
    std::vector<std::string> run;
    for (int i = 0; i < 12; ++i) run.push_back("inj" + tag + "n" + std::to_string(i));

    synth::DocBuilder a("pair_a" + tag);
    synth::DocBuilder b("pair_b" + tag);
    a.unique_sentence(fill(rng));
    b.unique_sentence(fill(rng));
    std::vector<std::string> sent_a;
    std::vector<std::string> sent_b;
    for (int i = 0; i < 5; ++i) sent_a.push_back("pa" + tag + "x" + std::to_string(i));
    for (int i = 0; i < 5; ++i) sent_b.push_back("pb" + tag + "x" + std::to_string(i));
    sent_a.insert(sent_a.end(), run.begin(), run.end());
    sent_b.insert(sent_b.end(), run.begin(), run.end());
    sent_a.push_back("pa" + tag + "tail");
    a.sentence(sent_a);
    b.sentence(sent_b);

    std::unordered_set<std::uint64_t> hashes_a;
    for (const auto& fp : fingerprint_document(a.build(), params)) hashes_a.insert(fp.hash);
    bool shared = false;
    for (const auto& fp : fingerprint_document(b.build(), params)) {
      if (hashes_a.contains(fp.hash)) shared = true;
    }
    CHECK(shared);
  }

  // Runs shorter than k can never produce a shared hash.
  for (int iter = 0; iter < 200; ++iter) {
    std::string tag = std::to_string(iter);
    std::vector<std::string> run;
    for (int i = 0; i < 6; ++i) run.push_back("sh" + tag + "n" + std::to_string(i));
    synth::DocBuilder a("short_a" + tag);
    synth::DocBuilder b("short_b" + tag);
    std::vector<std::string> sent_a;
    std::vector<std::string> sent_b;
    for (int i = 0; i < 8; ++i) sent_a.push_back("sa" + tag + "x" + std::to_string(i));
    for (int i = 0; i < 8; ++i) sent_b.push_back("sb" + tag + "x" + std::to_string(i));
    sent_a.insert(sent_a.end(), run.begin(), run.end());
    sent_b.insert(sent_b.end(), run.begin(), run.end());
    a.sentence(sent_a);
    b.sentence(sent_b);

    std::unordered_set<std::uint64_t> hashes_a;
    for (const auto& fp : fingerprint_document(a.build(), params)) hashes_a.insert(fp.hash);
    int shared = 0;
    for (const auto& fp : fingerprint_document(b.build(), params)) {
      if (hashes_a.contains(fp.hash)) ++shared;
    }
    CHECK(shared == 0);
  }
}
