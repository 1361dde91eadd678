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

#include "g2p/checkpoint.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace g2p {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json config_to_json(const ModelConfig& c) {
  ordered_json j;
  j["reinforcer"] = reinforcer_kind_name(c.reinforcer);
  j["lm"] = lm_kind_name(c.lm);
  j["embed_dim"] = c.embed_dim;
  j["num_layers"] = c.num_layers;
  j["num_heads"] = c.num_heads;
  j["ffn_dim"] = c.ffn_dim;
  j["token_ffn_dim"] = c.token_ffn_dim;
  j["max_seq_len"] = c.max_seq_len;
  j["kernel_size"] = c.kernel_size;
  j["shift_size"] = c.shift_size;
  j["use_positional"] = c.use_positional;
  j["reinforcer_bias"] = c.reinforcer_bias;
  return j;
}

ModelConfig config_from_json(const ordered_json& j) {
  ModelConfig c;
  c.reinforcer = parse_reinforcer_kind(j.at("reinforcer").get<std::string>());
  c.lm = parse_lm_kind(j.at("lm").get<std::string>());
  c.embed_dim = j.at("embed_dim").get<int>();
  c.num_layers = j.at("num_layers").get<int>();
  c.num_heads = j.at("num_heads").get<int>();
  c.ffn_dim = j.at("ffn_dim").get<int>();
  c.token_ffn_dim = j.at("token_ffn_dim").get<int>();
  c.max_seq_len = j.at("max_seq_len").get<int>();
  c.kernel_size = j.at("kernel_size").get<int>();
  c.shift_size = j.at("shift_size").get<int>();
  c.use_positional = j.at("use_positional").get<bool>();
  c.reinforcer_bias = j.at("reinforcer_bias").get<bool>();
  return c;
}

}  // namespace

void save_checkpoint(const Model& model, const std::string& dir) {
  fs::create_directories(dir);
  ordered_json manifest;
  manifest["format_version"] = kCheckpointVersion;
  manifest["config"] = config_to_json(model.config());
  manifest["vocab"]["chars"] = model.vocab().chars();
  manifest["vocab"]["phonemes"] = model.vocab().phonemes();
  ordered_json dict = ordered_json::object();
  for (const auto& [ch, cands] : model.dictionary().entries())
    dict[ch] = cands;
  manifest["dictionary"] = dict;

  ordered_json index = ordered_json::array();
  std::ofstream bin(fs::path(dir) / "weights.bin", std::ios::binary);
  if (!bin) throw std::runtime_error("checkpoint: cannot write weights.bin");
  std::size_t offset = 0;
  for (const NamedParam& p : model.params()) {
    ordered_json entry;
    entry["name"] = p.name;
    entry["shape"] = p.tensor.shape();
    entry["byte_offset"] = offset;
    index.push_back(entry);
    for (double v : p.tensor.data()) {
      float f = static_cast<float>(v);
      bin.write(reinterpret_cast<const char*>(&f), sizeof(float));
    }
    offset += p.tensor.numel() * sizeof(float);
  }
  manifest["tensors"] = index;
  bin.close();

  std::ofstream mf(fs::path(dir) / "manifest.json");
  if (!mf) throw std::runtime_error("checkpoint: cannot write manifest.json");
  mf << manifest.dump(2) << "\n";
}

Model load_checkpoint(const std::string& dir) {
  std::ifstream mf(fs::path(dir) / "manifest.json");
  if (!mf)
    throw std::runtime_error("checkpoint: missing " + dir + "/manifest.json");
  ordered_json manifest = ordered_json::parse(mf);
  if (manifest.at("format_version").get<int>() != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported format version");

  ModelConfig cfg = config_from_json(manifest.at("config"));
  Vocabulary vocab;
  for (const auto& c : manifest.at("vocab").at("chars"))
    vocab.add_char(c.get<std::string>());
  for (const auto& p : manifest.at("vocab").at("phonemes"))
    vocab.add_phoneme(p.get<std::string>());
  PolyphoneDictionary dict;
  for (const auto& [ch, cands] : manifest.at("dictionary").items())
    for (const auto& cand : cands) dict.add(ch, cand.get<std::string>());

  Model model(cfg, std::move(vocab), std::move(dict), 0);

  std::ifstream bin(fs::path(dir) / "weights.bin", std::ios::binary);
  if (!bin)
    throw std::runtime_error("checkpoint: missing " + dir + "/weights.bin");
  std::size_t ti = 0;
  for (const auto& entry : manifest.at("tensors")) {
    if (ti >= model.params().size())
      throw std::runtime_error("checkpoint: tensor index longer than model");
    NamedParam& p = model.params()[ti++];
    if (entry.at("name").get<std::string>() != p.name)
      throw std::runtime_error("checkpoint: tensor name mismatch at '" +
                               p.name + "'");
    std::vector<int> shape = entry.at("shape").get<std::vector<int>>();
    if (shape != p.tensor.shape())
      throw std::runtime_error("checkpoint: shape mismatch for '" + p.name +
                               "'");
    bin.seekg(static_cast<std::streamoff>(entry.at("byte_offset").get<std::size_t>()));
    for (double& v : p.tensor.data()) {
      float f;
      bin.read(reinterpret_cast<char*>(&f), sizeof(float));
      if (!bin) throw std::runtime_error("checkpoint: truncated weights.bin");
      v = static_cast<double>(f);
    }
  }
  if (ti != model.params().size())
    throw std::runtime_error("checkpoint: tensor index shorter than model");
  return model;
}

}  // namespace g2p
