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

#include "g2p/vocab.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace g2p {

Vocabulary::Vocabulary() {
  add_char(kPadSymbol);
  add_char(kUnkSymbol);
  add_phoneme(kPadSymbol);
  add_phoneme(kUnkSymbol);
}

int Vocabulary::add_char(const std::string& c) {
  auto [it, inserted] =
      char_to_id_.try_emplace(c, static_cast<int>(id_to_char_.size()));
  if (inserted) id_to_char_.push_back(c);
  return it->second;
}

int Vocabulary::add_phoneme(const std::string& p) {
  auto [it, inserted] =
      phoneme_to_id_.try_emplace(p, static_cast<int>(id_to_phoneme_.size()));
  if (inserted) id_to_phoneme_.push_back(p);
  return it->second;
}

int Vocabulary::char_id(const std::string& c) const {
  auto it = char_to_id_.find(c);
  return it == char_to_id_.end() ? kUnkId : it->second;
}

int Vocabulary::phoneme_id(const std::string& p) const {
  auto it = phoneme_to_id_.find(p);
  return it == phoneme_to_id_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::char_at(int id) const {
  return id_to_char_.at(static_cast<std::size_t>(id));
}

const std::string& Vocabulary::phoneme_at(int id) const {
  return id_to_phoneme_.at(static_cast<std::size_t>(id));
}

bool Vocabulary::has_char(const std::string& c) const {
  return char_to_id_.count(c) > 0;
}

bool Vocabulary::has_phoneme(const std::string& p) const {
  return phoneme_to_id_.count(p) > 0;
}

void PolyphoneDictionary::add(const std::string& character,
                              const std::string& pinyin) {
  auto& cands = entries_[character];
  if (std::find(cands.begin(), cands.end(), pinyin) == cands.end())
    cands.push_back(pinyin);
}

bool PolyphoneDictionary::contains(const std::string& character) const {
  return entries_.count(character) > 0;
}

const std::vector<std::string>& PolyphoneDictionary::candidates(
    const std::string& character) const {
  auto it = entries_.find(character);
  if (it == entries_.end())
    throw std::out_of_range("dictionary: unknown character '" + character +
                            "'");
  return it->second;
}

bool PolyphoneDictionary::is_polyphone(const std::string& character) const {
  auto it = entries_.find(character);
  return it != entries_.end() && it->second.size() >= 2;
}

std::string PolyphoneDictionary::serialize() const {
  std::ostringstream os;
  for (const auto& [ch, cands] : entries_) {
    os << ch << '\t';
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (i) os << ',';
      os << cands[i];
    }
    os << '\n';
  }
  return os.str();
}

PolyphoneDictionary PolyphoneDictionary::deserialize(const std::string& text) {
  PolyphoneDictionary dict;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::string ch = line.substr(0, tab);
    std::string rest = line.substr(tab + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      auto comma = rest.find(',', pos);
      std::string cand = rest.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!cand.empty()) dict.add(ch, cand);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  return dict;
}

std::vector<std::string> utf8_chars(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char b = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if ((b & 0x80) == 0x00) len = 1;
    else if ((b & 0xE0) == 0xC0) len = 2;
    else if ((b & 0xF0) == 0xE0) len = 3;
    else if ((b & 0xF8) == 0xF0) len = 4;
    if (i + len > s.size()) len = 1;
    out.push_back(s.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace g2p
