// numerics/checkpoint.cc

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

#include "msrnnt/numerics/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "msrnnt/common/check.h"

namespace msrnnt {

namespace {

constexpr char kMagic[8] = {'M', 'S', 'R', 'N', 'N', 'T', 'C', 'K'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  MSRNNT_CHECK_AS(is.good(), ParseError, "checkpoint truncated");
  return v;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path,
                      const std::string& config_json,
                      const CheckpointMap& params) {
  std::ofstream os(path, std::ios::binary);
  MSRNNT_CHECK(os.good(), "cannot open checkpoint for writing: " << path.string());
  os.write(kMagic, 8);
  put_u32(os, kCheckpointVersion);
  put_u32(os, static_cast<std::uint32_t>(config_json.size()));
  os.write(config_json.data(), static_cast<std::streamsize>(config_json.size()));
  put_u32(os, static_cast<std::uint32_t>(params.size()));
  for (const auto& [name, entry] : params) {
    std::size_t expect = 1;
    for (int d : entry.dims) expect *= static_cast<std::size_t>(d);
    MSRNNT_CHECK(expect == entry.values.size(),
                 "checkpoint entry " << name << ": dims do not match value count");
    put_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(os, static_cast<std::uint32_t>(entry.dims.size()));
    for (int d : entry.dims) put_u32(os, static_cast<std::uint32_t>(d));
    os.write(reinterpret_cast<const char*>(entry.values.data()),
             static_cast<std::streamsize>(entry.values.size() * sizeof(float)));
  }
  MSRNNT_CHECK(os.good(), "write failed: " << path.string());
}

std::pair<std::string, CheckpointMap> read_checkpoint(
    const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  MSRNNT_CHECK_AS(is.good(), ParseError,
                  "cannot open checkpoint: " << path.string());
  char magic[8];
  is.read(magic, 8);
  MSRNNT_CHECK_AS(is.good() && std::memcmp(magic, kMagic, 8) == 0, ParseError,
                  path.string() << ": not a msrnnt checkpoint");
  const std::uint32_t version = get_u32(is);
  MSRNNT_CHECK_AS(version == kCheckpointVersion, ParseError,
                  path.string() << ": unsupported checkpoint version " << version);

  const std::uint32_t header_len = get_u32(is);
  std::string config_json(header_len, '\0');
  is.read(config_json.data(), header_len);
  MSRNNT_CHECK_AS(is.good(), ParseError, "checkpoint truncated in header");

  const std::uint32_t count = get_u32(is);
  CheckpointMap params;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = get_u32(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    MSRNNT_CHECK_AS(is.good(), ParseError,
                    "checkpoint truncated at parameter " << i);
    CheckpointEntry entry;
    const std::uint32_t rank = get_u32(is);
    MSRNNT_CHECK_AS(rank <= 4, ParseError,
                    "checkpoint entry " << name << ": implausible rank " << rank);
    std::size_t total = 1;
    for (std::uint32_t r = 0; r < rank; ++r) {
      const std::uint32_t d = get_u32(is);
      entry.dims.push_back(static_cast<int>(d));
      total *= d;
    }
    entry.values.resize(total);
    is.read(reinterpret_cast<char*>(entry.values.data()),
            static_cast<std::streamsize>(total * sizeof(float)));
    MSRNNT_CHECK_AS(is.good(), ParseError,
                    "checkpoint truncated in values of " << name);
    params.emplace(std::move(name), std::move(entry));
  }
  return {std::move(config_json), std::move(params)};
}

}  // namespace msrnnt
