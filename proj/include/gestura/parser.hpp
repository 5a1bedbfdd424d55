#pragma once

// Phonetic string front end.
//
//   phrase   := word (' '+ word)*          words are separated by a pause
//   word     := token ('.' token)*         '.' concatenates syllables
//   token    := syllables with unmarked boundaries (maximal onset)
//   syllable := C* V+ C*                   V+ of length >= 2 is a diphthong

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gestura/error.hpp"
#include "gestura/inventory.hpp"
#include "gestura/syllable_graph.hpp"

namespace gestura {

struct ParseOptions {
  double period_ms = 100.0;
  double pause_ms = 150.0;
  double delta_o = 0.7;
  double delta_e = 0.7;
  double cvc_hold_ms = 0.0;

  SyllableOptions syllable() const { return {period_ms, delta_o, delta_e, cvc_hold_ms}; }
};

struct Phone {
  std::string symbol;  ///< canonical inventory symbol
  bool vowel = false;
  std::size_t position = 0;  ///< code-point offset in the input
};

struct ParsedSyllable {
  SyllableSpec spec;
  std::size_t position = 0;
};

namespace detail {

inline std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

inline std::vector<Phone> tokenize(std::string_view token, std::size_t base_position,
                                   const PhonemeInventory& inv) {
  const std::vector<std::string> spellings = inv.spellings();
  std::vector<Phone> out;
  std::size_t i = 0;
  std::size_t cp = base_position;
  while (i < token.size()) {
    std::size_t best = 0;
    std::string best_symbol;
    for (const auto& s : spellings) {
      if (s.size() > best && token.substr(i, s.size()) == s) {
        best = s.size();
        best_symbol = s;
      }
    }
    if (best == 0) {
      std::size_t len = 1;
      while (i + len < token.size() && (static_cast<unsigned char>(token[i + len]) & 0xC0) == 0x80) ++len;
      throw ParseError(cp, "unknown symbol '" + std::string(token.substr(i, len)) + "'");
    }
    const std::string canonical = inv.canonical(best_symbol);
    out.push_back({canonical, inv.is_vowel(canonical), cp});
    cp += utf8_length(token.substr(i, best));
    i += best;
  }
  return out;
}

inline std::vector<std::string> symbols(const std::vector<Phone>& phones, std::size_t from,
                                        std::size_t to) {
  std::vector<std::string> out;
  for (std::size_t k = from; k < to; ++k) out.push_back(phones[k].symbol);
  return out;
}

}  // namespace detail

/// Split one token into syllables. Between two vowels the next syllable takes
/// the longest onset the inventory allows (two consonants with a cluster rule,
/// else one).
inline std::vector<ParsedSyllable> segment_token(const std::vector<Phone>& phones,
                                                 std::size_t token_position,
                                                 const PhonemeInventory& inv) {
  struct Nucleus {
    std::size_t begin, end;
  };
  std::vector<Nucleus> nuclei;
  for (std::size_t k = 0; k < phones.size();) {
    if (!phones[k].vowel) {
      ++k;
      continue;
    }
    std::size_t e = k;
    while (e < phones.size() && phones[e].vowel) ++e;
    nuclei.push_back({k, e});
    k = e;
  }
  if (nuclei.empty()) throw ParseError(token_position, "syllable without a vowel");

  // Boundaries: syllable s spans [starts[s], starts[s+1]).
  std::vector<std::size_t> starts = {0};
  for (std::size_t s = 1; s < nuclei.size(); ++s) {
    const std::size_t run_begin = nuclei[s - 1].end;
    const std::size_t run_end = nuclei[s].begin;
    std::size_t onset = std::min<std::size_t>(run_end - run_begin, 1);
    if (run_end - run_begin >= 2 &&
        inv.has_cluster_rule(phones[run_end - 2].symbol, phones[run_end - 1].symbol)) {
      onset = 2;
    }
    starts.push_back(run_end - onset);
  }
  starts.push_back(phones.size());

  std::vector<ParsedSyllable> out;
  for (std::size_t s = 0; s < nuclei.size(); ++s) {
    ParsedSyllable p;
    p.position = phones[starts[s]].position;
    p.spec.onset = detail::symbols(phones, starts[s], nuclei[s].begin);
    p.spec.nucleus = detail::symbols(phones, nuclei[s].begin, nuclei[s].end);
    p.spec.coda = detail::symbols(phones, nuclei[s].end, starts[s + 1]);
    if (p.spec.onset.size() > 2) {
      throw ParseError(p.position, "more than 2 consonants in an onset cluster");
    }
    if (p.spec.coda.size() > 2) {
      throw ParseError(phones[nuclei[s].end].position, "more than 2 consonants in a coda cluster");
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// Syllables of one word (no spaces), with explicit '.' boundaries honored.
inline std::vector<ParsedSyllable> split_word(std::string_view word, std::size_t base_position,
                                              const PhonemeInventory& inv) {
  std::vector<ParsedSyllable> out;
  std::size_t start = 0;
  std::size_t cp = base_position;
  while (true) {
    const std::size_t dot = word.find('.', start);
    const std::string_view token = word.substr(start, dot == std::string_view::npos ? dot : dot - start);
    if (token.empty()) throw ParseError(cp, "empty syllable");
    auto phones = detail::tokenize(token, cp, inv);
    auto syls = segment_token(phones, cp, inv);
    out.insert(out.end(), syls.begin(), syls.end());
    cp += detail::utf8_length(token) + 1;
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

/// Build the graph of a phrase: syllables of a word are concatenated, words
/// are separated by a pause of `pause_ms`.
inline WordGraph parse_word(std::string_view text, const PhonemeInventory& inv,
                            const ParseOptions& opt = {}) {
  WordGraph result;
  std::size_t i = 0;
  std::size_t cp = 0;
  bool first_word = true;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == '\t') {
      ++i;
      ++cp;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    const std::string_view word = text.substr(i, j - i);
    WordGraph wg;
    for (const auto& syl : split_word(word, cp, inv)) {
      SyllableGraph sg;
      try {
        sg = build_syllable(syl.spec, inv, opt.syllable());
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::kDomain) throw;
        throw ParseError(syl.position, e.what());
      }
      wg = concatenate(wg, sg);
    }
    result = first_word ? wg : insert_pause(result, wg, opt.pause_ms);
    first_word = false;
    cp += detail::utf8_length(word);
    i = j;
  }
  if (result.empty()) throw ParseError(0, "empty input");
  return result;
}

}  // namespace gestura
