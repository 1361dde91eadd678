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

#include "g2p/data.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace g2p {

namespace {

std::string to_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

// "u:" (CEDICT umlaut) -> "v"
std::string normalize_pinyin(std::string p) {
  p = to_lower(p);
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 'u' && i + 1 < p.size() && p[i + 1] == ':') {
      out.push_back('v');
      ++i;
    } else {
      out.push_back(p[i]);
    }
  }
  return out;
}

bool valid_syllable(const std::string& s) {
  if (s.size() < 2) return false;
  char tone = s.back();
  if (tone < '1' || tone > '5') return false;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (!std::isalpha(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

int syllable_tone(const std::string& s) { return s.back() - '0'; }

std::string utf8_encode(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

char32_t utf8_codepoint(const std::string& c) {
  unsigned char b0 = static_cast<unsigned char>(c[0]);
  if ((b0 & 0x80) == 0) return b0;
  if ((b0 & 0xE0) == 0xC0 && c.size() >= 2)
    return ((b0 & 0x1F) << 6) | (static_cast<unsigned char>(c[1]) & 0x3F);
  if ((b0 & 0xF0) == 0xE0 && c.size() >= 3)
    return ((b0 & 0x0F) << 12) |
           ((static_cast<unsigned char>(c[1]) & 0x3F) << 6) |
           (static_cast<unsigned char>(c[2]) & 0x3F);
  if ((b0 & 0xF8) == 0xF0 && c.size() >= 4)
    return ((b0 & 0x07) << 18) |
           ((static_cast<unsigned char>(c[1]) & 0x3F) << 12) |
           ((static_cast<unsigned char>(c[2]) & 0x3F) << 6) |
           (static_cast<unsigned char>(c[3]) & 0x3F);
  return b0;
}

bool is_cjk(const std::string& c) {
  char32_t cp = utf8_codepoint(c);
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF);
}

}  // namespace

CedictResult parse_cedict(const std::string& text) {
  CedictResult res;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto sp1 = line.find(' ');
    auto sp2 = sp1 == std::string::npos ? std::string::npos
                                        : line.find(' ', sp1 + 1);
    auto lb = line.find('[');
    auto rb = lb == std::string::npos ? std::string::npos : line.find(']', lb);
    if (sp2 == std::string::npos || lb == std::string::npos ||
        rb == std::string::npos || lb < sp2) {
      ++res.skipped_lines;
      continue;
    }
    std::string simp = line.substr(sp1 + 1, sp2 - sp1 - 1);
    std::string pinyin_field = line.substr(lb + 1, rb - lb - 1);
    if (utf8_chars(simp).size() != 1) {
      ++res.excluded_multi;
      continue;
    }
    std::vector<std::string> sylls = split_ws(pinyin_field);
    if (sylls.size() != 1) {
      ++res.skipped_lines;
      continue;
    }
    std::string syl = normalize_pinyin(sylls[0]);
    if (!valid_syllable(syl)) {
      ++res.skipped_lines;
      continue;
    }
    res.dict.add(simp, syl);
    ++res.kept_entries;
  }
  return res;
}

CorpusLoadResult load_corpus(const std::string& text, Vocabulary& vocab,
                             const PolyphoneDictionary& dict,
                             bool build_vocab) {
  CorpusLoadResult res;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      ++res.dropped_mismatch;
      continue;
    }
    std::vector<std::string> chars = utf8_chars(line.substr(0, tab));
    std::vector<std::string> sylls = split_ws(line.substr(tab + 1));
    if (chars.empty() || chars.size() != sylls.size()) {
      ++res.dropped_mismatch;
      continue;
    }
    Sample s;
    s.chars = chars;
    for (std::size_t i = 0; i < chars.size(); ++i) {
      s.char_ids.push_back(build_vocab ? vocab.add_char(chars[i])
                                       : vocab.char_id(chars[i]));
      s.phoneme_ids.push_back(build_vocab ? vocab.add_phoneme(sylls[i])
                                          : vocab.phoneme_id(sylls[i]));
      if (dict.is_polyphone(chars[i]))
        s.polyphone_positions.push_back(static_cast<int>(i));
    }
    res.samples.push_back(std::move(s));
    ++res.kept;
  }
  if (build_vocab) {
    // Every dictionary candidate of an in-vocabulary character must have a
    // phoneme id, for candidate-restricted prediction.
    for (const auto& [ch, cands] : dict.entries())
      if (vocab.has_char(ch))
        for (const std::string& c : cands) vocab.add_phoneme(c);
  }
  if (res.samples.empty())
    throw std::runtime_error("load_corpus: empty corpus");
  return res;
}

CorpusLoadResult load_corpus_file(const std::string& path, Vocabulary& vocab,
                                  const PolyphoneDictionary& dict,
                                  bool build_vocab) {
  return load_corpus(read_file(path), vocab, dict, build_vocab);
}

CorpusSplit split_corpus(const std::vector<Sample>& samples,
                         std::array<int, 3> ratios, std::uint64_t seed) {
  std::size_t n = samples.size();
  if (n < 3) throw std::runtime_error("split_corpus: need at least 3 samples");
  if (ratios[0] <= 0 || ratios[1] <= 0 || ratios[2] <= 0)
    throw std::runtime_error("split_corpus: ratios must be positive");
  long total = ratios[0] + ratios[1] + ratios[2];
  std::size_t n_train = n * static_cast<std::size_t>(ratios[0]) / total;
  std::size_t n_val = n * static_cast<std::size_t>(ratios[1]) / total;
  std::size_t n_test = n * static_cast<std::size_t>(ratios[2]) / total;
  n_train += n - (n_train + n_val + n_test);  // remainder to train

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);

  CorpusSplit out;
  std::size_t p = 0;
  for (std::size_t i = 0; i < n_train; ++i) out.train.push_back(samples[idx[p++]]);
  for (std::size_t i = 0; i < n_val; ++i) out.val.push_back(samples[idx[p++]]);
  for (std::size_t i = 0; i < n_test; ++i) out.test.push_back(samples[idx[p++]]);
  return out;
}

namespace {

struct SandhiInventory {
  std::vector<std::string> chars;       // UTF-8, 40 of them
  std::vector<std::string> syllables;   // toneless bases
  std::vector<int> canonical_tone;
  std::vector<bool> yi_analog;
};

const SandhiInventory& sandhi_inventory() {
  static const SandhiInventory inv = [] {
    SandhiInventory v;
    v.syllables = {"ba",  "bo",  "da",  "de",  "ga",  "gu",  "ka",  "ke",
                   "la",  "li",  "ma",  "mo",  "na",  "nu",  "pa",  "po",
                   "sa",  "su",  "ta",  "ti",  "wa",  "wo",  "ya",  "yu",
                   "za",  "zo",  "cha", "chi", "sha", "shu", "zha", "zhu",
                   "fa",  "fo",  "ha",  "he",  "ja",  "ju",  "ra",  "ri"};
    for (int i = 0; i < 40; ++i) {
      v.chars.push_back(utf8_encode(static_cast<char32_t>(0x4E00 + i)));
      int tone;
      if (i < 16) tone = 3;              // third-tone polyphones (R1)
      else if (i == 16) tone = 4;        // the yi-analog (R2)
      else if (i < 29) tone = 4;
      else if (i < 34) tone = 1;
      else if (i < 38) tone = 2;
      else tone = 5;
      v.canonical_tone.push_back(tone);
      v.yi_analog.push_back(i == 16);
    }
    return v;
  }();
  return inv;
}

}  // namespace

std::vector<std::string> apply_sandhi_rules(
    const std::vector<std::string>& canonical,
    const std::vector<bool>& is_yi_analog) {
  std::size_t n = canonical.size();
  std::vector<std::string> surface = canonical;
  for (std::size_t t = 0; t < n; ++t) {
    int next_tone = t + 1 < n ? syllable_tone(canonical[t + 1]) : 0;
    std::string base = canonical[t].substr(0, canonical[t].size() - 1);
    if (is_yi_analog[t]) {
      surface[t] = base + (next_tone == 4 ? '2' : '4');
    } else if (syllable_tone(canonical[t]) == 3 && next_tone == 3) {
      surface[t] = base + '2';
    }
  }
  return surface;
}

SandhiCorpus gen_sandhi_corpus(int n_sentences, std::uint64_t seed) {
  if (n_sentences < 1)
    throw std::runtime_error("gen_sandhi_corpus: need at least one sentence");
  const SandhiInventory& inv = sandhi_inventory();
  SandhiCorpus out;
  for (int i = 0; i < 40; ++i) {
    std::string canon = inv.syllables[i] + std::to_string(inv.canonical_tone[i]);
    out.dict.add(inv.chars[i], canon);
    if (inv.yi_analog[i])
      out.dict.add(inv.chars[i], inv.syllables[i] + "2");
    else if (inv.canonical_tone[i] == 3)
      out.dict.add(inv.chars[i], inv.syllables[i] + "2");
  }
  out.lexicon_tsv = out.dict.serialize();

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len_dist(5, 15);
  std::uniform_int_distribution<int> char_dist(0, 39);

  // label distribution per polyphone character, for the pointwise Bayes rate
  std::map<int, std::map<std::string, long>> label_counts;

  std::ostringstream corpus;
  for (int si = 0; si < n_sentences; ++si) {
    int t = len_dist(rng);
    std::vector<int> ids(static_cast<std::size_t>(t));
    for (int& id : ids) id = char_dist(rng);
    std::vector<std::string> canonical;
    std::vector<bool> yi;
    std::string sentence;
    for (int id : ids) {
      canonical.push_back(inv.syllables[id] +
                          std::to_string(inv.canonical_tone[id]));
      yi.push_back(inv.yi_analog[id]);
      sentence += inv.chars[id];
    }
    std::vector<std::string> surface = apply_sandhi_rules(canonical, yi);
    corpus << sentence << '\t';
    for (std::size_t i = 0; i < surface.size(); ++i) {
      if (i) corpus << ' ';
      corpus << surface[i];
    }
    corpus << '\n';
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (inv.canonical_tone[ids[i]] == 3 || inv.yi_analog[ids[i]])
        ++label_counts[ids[i]][surface[i]];
  }
  out.corpus_tsv = corpus.str();

  long correct = 0, total = 0;
  for (const auto& [id, counts] : label_counts) {
    long best = 0, sub = 0;
    for (const auto& [label, c] : counts) {
      best = std::max(best, c);
      sub += c;
    }
    correct += best;
    total += sub;
  }
  out.polyphone_tokens = static_cast<int>(total);
  out.pointwise_bayes_pct =
      total > 0 ? 100.0 * static_cast<double>(correct) / static_cast<double>(total)
                : 0.0;
  return out;
}

WordLengthStats word_length_stats(const std::string& segmented_text,
                                  const PolyphoneDictionary& dict) {
  std::vector<std::string> words = split_ws(segmented_text);
  if (words.empty())
    throw std::runtime_error("word_length_stats: empty input");
  WordLengthStats st;
  std::set<std::string> unique_chars, unique_poly;
  long char_tokens = 0, poly_tokens = 0;
  for (const std::string& w : words) {
    std::vector<std::string> chars = utf8_chars(w);
    int bucket = std::min<int>(static_cast<int>(chars.size()), 4) - 1;
    bool poly = false;
    for (const std::string& c : chars) {
      unique_chars.insert(c);
      ++char_tokens;
      if (dict.is_polyphone(c)) {
        poly = true;
        unique_poly.insert(c);
        ++poly_tokens;
      }
    }
    ++st.words[static_cast<std::size_t>(bucket)];
    ++st.total_words;
    if (poly) {
      ++st.polyphonic_words[static_cast<std::size_t>(bucket)];
      ++st.total_polyphonic;
    }
  }
  if (!unique_chars.empty())
    st.polyphone_type_pct =
        100.0 * static_cast<double>(unique_poly.size()) / unique_chars.size();
  if (char_tokens > 0)
    st.polyphone_token_pct =
        100.0 * static_cast<double>(poly_tokens) / static_cast<double>(char_tokens);
  return st;
}

std::string WordLengthStats::to_csv() const {
  static const char* names[4] = {"1", "2", "3", ">3"};
  std::ostringstream os;
  os << "bucket,words,polyphonic_words,pct_words,pct_poly\n";
  os.setf(std::ios::fixed);
  os.precision(2);
  for (int b = 0; b < 4; ++b) {
    double pw = total_words > 0
                    ? 100.0 * static_cast<double>(words[b]) / total_words
                    : 0.0;
    double pp = total_polyphonic > 0
                    ? 100.0 * static_cast<double>(polyphonic_words[b]) /
                          total_polyphonic
                    : 0.0;
    os << names[b] << ',' << words[b] << ',' << polyphonic_words[b] << ','
       << pw << ',' << pp << '\n';
  }
  return os.str();
}

DatabakerResult convert_databaker(const std::string& text) {
  DatabakerResult res;
  std::istringstream is(text);
  std::string line;
  std::string pending_sentence;
  auto flush_failure = [&res](const std::string& why) {
    ++res.failed;
    if (res.failures.size() < 10) res.failures.push_back(why);
  };
  std::ostringstream out;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
      trimmed.erase(trimmed.begin());
    if (trimmed.empty()) continue;
    if (std::isdigit(static_cast<unsigned char>(trimmed[0]))) {
      // "ID<TAB>sentence with #N prosody marks"
      if (!pending_sentence.empty())
        flush_failure("sentence without pinyin line: " + pending_sentence);
      auto tab = trimmed.find_first_of("\t ");
      std::string raw = tab == std::string::npos ? "" : trimmed.substr(tab + 1);
      std::string sentence;
      for (const std::string& c : utf8_chars(raw))
        if (is_cjk(c)) sentence += c;
      pending_sentence = sentence;
      if (pending_sentence.empty()) flush_failure("no CJK characters: " + trimmed);
    } else {
      if (pending_sentence.empty()) {
        flush_failure("pinyin line without sentence: " + trimmed);
        continue;
      }
      std::vector<std::string> sylls;
      for (std::string tok : split_ws(trimmed)) {
        std::string clean;
        for (char c : tok)
          if (std::isalnum(static_cast<unsigned char>(c)))
            clean.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (clean.empty()) continue;
        if (!std::isdigit(static_cast<unsigned char>(clean.back())))
          clean.push_back('5');  // neutral tone when unmarked
        sylls.push_back(clean);
      }
      std::size_t n_chars = utf8_chars(pending_sentence).size();
      if (n_chars == sylls.size() && n_chars > 0) {
        out << pending_sentence << '\t';
        for (std::size_t i = 0; i < sylls.size(); ++i) {
          if (i) out << ' ';
          out << sylls[i];
        }
        out << '\n';
        ++res.converted;
      } else {
        flush_failure("length mismatch (" + std::to_string(n_chars) + " chars, " +
                      std::to_string(sylls.size()) + " syllables): " +
                      pending_sentence);
      }
      pending_sentence.clear();
    }
  }
  if (!pending_sentence.empty())
    flush_failure("sentence without pinyin line: " + pending_sentence);
  res.corpus_tsv = out.str();
  return res;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write file: " + path);
  f << content;
}

}  // namespace g2p
