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

#include <map>
#include <string>
#include <vector>

namespace g2p {

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr const char* kPadSymbol = "<pad>";
inline constexpr const char* kUnkSymbol = "<unk>";

// Bijective symbol/id maps for graphemes (UTF-8 characters) and phonemes
// (pinyin syllable + tone digit, e.g. "wei4"). Ids 0/1 are PAD/UNK.
class Vocabulary {
 public:
  Vocabulary();

  int add_char(const std::string& c);   // returns id (existing or new)
  int add_phoneme(const std::string& p);

  int char_id(const std::string& c) const;     // kUnkId when absent
  int phoneme_id(const std::string& p) const;  // kUnkId when absent
  const std::string& char_at(int id) const;
  const std::string& phoneme_at(int id) const;
  bool has_char(const std::string& c) const;
  bool has_phoneme(const std::string& p) const;

  int num_chars() const { return static_cast<int>(id_to_char_.size()); }
  int num_phonemes() const { return static_cast<int>(id_to_phoneme_.size()); }

  const std::vector<std::string>& chars() const { return id_to_char_; }
  const std::vector<std::string>& phonemes() const { return id_to_phoneme_; }

 private:
  std::map<std::string, int> char_to_id_;
  std::map<std::string, int> phoneme_to_id_;
  std::vector<std::string> id_to_char_;
  std::vector<std::string> id_to_phoneme_;
};

// Character -> ordered candidate pronunciations. A character is a polyphone
// iff it has two or more candidates.
class PolyphoneDictionary {
 public:
  void add(const std::string& character, const std::string& pinyin);
  bool contains(const std::string& character) const;
  const std::vector<std::string>& candidates(const std::string& character) const;
  bool is_polyphone(const std::string& character) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }

  // Sorted "char<TAB>pinyin,pinyin,..." lines.
  std::string serialize() const;
  static PolyphoneDictionary deserialize(const std::string& text);

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

// One sentence: aligned character/phoneme ids plus the ascending positions
// of its polyphones.
struct Sample {
  std::vector<int> char_ids;
  std::vector<int> phoneme_ids;
  std::vector<int> polyphone_positions;
  std::vector<std::string> chars;  // surface characters, for predict/restrict

  int length() const { return static_cast<int>(char_ids.size()); }
  int num_polyphones() const {
    return static_cast<int>(polyphone_positions.size());
  }
};

// Splits a UTF-8 string into code-point units.
std::vector<std::string> utf8_chars(const std::string& s);

}  // namespace g2p
