#include "overlap/winnow.hpp"

#include <limits>
#include <stdexcept>

namespace overlap {

void WinnowParams::validate() const {
  if (k < 1) throw std::invalid_argument("winnow: k must be >= 1");
  if (t < k) throw std::invalid_argument("winnow: t must be >= k");
}

std::uint64_t hash_kgram(std::span<const std::string> tokens) {
  // FNV-1a over the tokens joined with 0x1F. Tokens are alphanumeric, so
  // the separator cannot collide with token content.
  constexpr std::uint64_t kOffset = 14695981039346656037ull;
  constexpr std::uint64_t kPrime = 1099511628211ull;
  std::uint64_t h = kOffset;
  bool first = true;
  for (const std::string& token : tokens) {
    if (!first) {
      h ^= 0x1F;
      h *= kPrime;
    }
    first = false;
    for (unsigned char c : token) {
      h ^= c;
      h *= kPrime;
    }
  }
  return h;
}

std::vector<std::uint64_t> kgram_hashes(const Sentence& sentence, int k) {
  if (k < 1) throw std::invalid_argument("kgram_hashes: k must be >= 1");
  const auto& tokens = sentence.tokens;
  if (tokens.size() < static_cast<std::size_t>(k)) return {};
  std::vector<std::uint64_t> hashes;
  hashes.reserve(tokens.size() - k + 1);
  for (std::size_t i = 0; i + k <= tokens.size(); ++i) {
    hashes.push_back(hash_kgram(std::span<const std::string>(&tokens[i], k)));
  }
  return hashes;
}

std::vector<Fingerprint> winnow_sentence(const Sentence& sentence,
                                         const WinnowParams& params) {
  params.validate();
  const std::vector<std::uint64_t> hashes = kgram_hashes(sentence, params.k);
  const std::size_t g = hashes.size();
  if (g == 0) return {};

  const std::size_t w = static_cast<std::size_t>(params.window());
  std::vector<Fingerprint> selected;

  // <= keeps the rightmost position among equal hashes.
  const auto min_in = [&](std::size_t begin, std::size_t end) {
    std::size_t best = begin;
    for (std::size_t i = begin; i < end; ++i) {
      if (hashes[i] <= hashes[best]) best = i;
    }
    return best;
  };

  if (g < w) {
    std::size_t best = min_in(0, g);
    selected.push_back(Fingerprint{hashes[best], sentence.ordinal,
                                   static_cast<std::uint32_t>(best)});
    return selected;
  }

  // Rightmost-minimum selection makes the chosen position within a window a
  // function of window content alone, which is what the shared-run
  // guarantee needs. Selected positions are non-decreasing, so comparing
  // against the last emitted position deduplicates.
  std::size_t last = std::numeric_limits<std::size_t>::max();
  for (std::size_t start = 0; start + w <= g; ++start) {
    std::size_t best = min_in(start, start + w);
    if (best != last) {
      selected.push_back(Fingerprint{hashes[best], sentence.ordinal,
                                     static_cast<std::uint32_t>(best)});
      last = best;
    }
  }
  return selected;
}

std::vector<Fingerprint> fingerprint_document(const Document& doc,
                                              const WinnowParams& params) {
  params.validate();
  std::vector<Fingerprint> fingerprints;
  for (const Sentence& sentence : doc.sentences) {
    auto selected = winnow_sentence(sentence, params);
    fingerprints.insert(fingerprints.end(), selected.begin(), selected.end());
  }
  return fingerprints;
}

}  // namespace overlap
