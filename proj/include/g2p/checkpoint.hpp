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

#include <string>

#include "g2p/model.hpp"

namespace g2p {

// Checkpoint layout: <dir>/manifest.json with the format version, model
// config, vocabulary tables, dictionary, and an ordered tensor index
// {name, shape, byte_offset}; <dir>/weights.bin holds the raw
// little-endian float32 data in index order.
inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const Model& model, const std::string& dir);
Model load_checkpoint(const std::string& dir);

}  // namespace g2p
