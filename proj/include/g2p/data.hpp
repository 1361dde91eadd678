// Copyright 2026 The g2p-reinforcer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "g2p/vocab.hpp"

namespace g2p {

// ---- CC-CEDICT lexicon -------------------------------------------------

struct LexiconEntry {
  std::string character;
  std::vector<std::string> candidates;
};

struct CedictResult {
  PolyphoneDictionary dict;
  int kept_entries = 0;
  int skipped_lines = 0;   // malformed, counted but never fatal
  int excluded_multi = 0;  // multi-character entries
};

// Line grammar: `TRAD SIMP [pin1 yin1] /gloss/.../`. Keeps single-character
// simplified entries, lowercases pinyin, maps "u:" to "v", merges duplicate
// characters preserving first-seen candidate order.
CedictResult parse_cedict(const std::string& text);

// ---- Corpus ------------------------------------------------------------

// One sample per line: `<sentence><TAB><space-separated syllables>`,
// syllable = latin letters + tone digit 1-5.
struct CorpusLoadResult {
  std::vector<Sample> samples;
  int kept = 0;
  int dropped_mismatch = 0;  // unequal source/target lengths
};

// Parses corpus text; drops length-mismatched pairs. When build_vocab is
// true, new characters/phonemes are added to vocab; otherwise unknown
// symbols map to UNK. Polyphone positions come from the dictionary.
CorpusLoadResult load_corpus(const std::string& text, Vocabulary& vocab,
                             const PolyphoneDictionary& dict, bool build_vocab);
CorpusLoadResult load_corpus_file(const std::string& path, Vocabulary& vocab,
                                  const PolyphoneDictionary& dict,
                                  bool build_vocab);

struct CorpusSplit {
  std::vector<Sample> train, val, test;
};

// Deterministic seeded shuffle, sizes floor(n*r) with the remainder going
// to train.
CorpusSplit split_corpus(const std::vector<Sample>& samples,
                         std::array<int, 3> ratios, std::uint64_t seed);

// ---- Synthetic tone-sandhi corpus --------------------------------------

struct SandhiCorpus {
  std::string corpus_tsv;           // CorpusFile content
  std::string lexicon_tsv;          // serialized dictionary
  PolyphoneDictionary dict;
  double pointwise_bayes_pct = 0;   // best possible single-character accuracy
  int polyphone_tokens = 0;
};

// Deterministic generator over a 40-character / ~60-phoneme inventory,
// sentence length 5..15. Sandhi rules, applied left-to-right in one pass
// over canonical tones:
//   R1: a tone-3 syllable immediately followed by a tone-3 becomes tone 2.
//   R2: the yi-analog character is tone 2 before a tone-4 syllable,
//       else tone 4.
SandhiCorpus gen_sandhi_corpus(int n_sentences, std::uint64_t seed);

// The rule oracle: surface syllables for a sentence given per-character
// canonical syllables ("...3") and the yi-analog flags.
std::vector<std::string> apply_sandhi_rules(
    const std::vector<std::string>& canonical,
    const std::vector<bool>& is_yi_analog);

// ---- Word-length statistics --------------------------------------------

struct WordLengthStats {
  // Buckets 1, 2, 3, >3.
  std::array<long, 4> words{};
  std::array<long, 4> polyphonic_words{};
  long total_words = 0;
  long total_polyphonic = 0;
  // Both readings of the polyphone share: unique grapheme types vs tokens.
  double polyphone_type_pct = 0;
  double polyphone_token_pct = 0;

  std::string to_csv() const;  // bucket,words,polyphonic_words,pct_words,pct_poly
};

// Input is whitespace-pre-segmented text; a word is polyphonic if it
// contains at least one dictionary polyphone.
WordLengthStats word_length_stats(const std::string& segmented_text,
                                  const PolyphoneDictionary& dict);

// ---- DataBaker conversion ----------------------------------------------

struct DatabakerResult {
  std::string corpus_tsv;
  int converted = 0;
  int failed = 0;
  std::vector<std::string> failures;  // diagnostics, first few
};

// Best-effort conversion of the DataBaker transcript format (ID + prosody-
// annotated sentence line followed by a pinyin line) into CorpusFile lines.
DatabakerResult convert_databaker(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace g2p
