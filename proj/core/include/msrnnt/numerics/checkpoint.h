// numerics/checkpoint.h

// Copyright 2026  The msrnnt authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MSRNNT_NUMERICS_CHECKPOINT_H_
#define MSRNNT_NUMERICS_CHECKPOINT_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace msrnnt {

// Single-file parameter archive. Binary layout, all integers and floats
// little-endian:
//   magic "MSRNNTCK" | u32 version | u32 header_len | header bytes (JSON:
//   architecture config + metadata) | u32 param count | per parameter:
//   u32 name_len, name, u32 rank, u32 dims[rank], f32 values (row-major).
struct CheckpointEntry {
  std::vector<int> dims;
  std::vector<float> values;
};

// std::map keeps write order deterministic.
using CheckpointMap = std::map<std::string, CheckpointEntry>;

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(const std::filesystem::path& path,
                      const std::string& config_json,
                      const CheckpointMap& params);

// Returns (config_json, params). Throws ParseError on malformed input.
std::pair<std::string, CheckpointMap> read_checkpoint(
    const std::filesystem::path& path);

}  // namespace msrnnt

#endif  // MSRNNT_NUMERICS_CHECKPOINT_H_
