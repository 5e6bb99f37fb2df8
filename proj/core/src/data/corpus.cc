// data/corpus.cc

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

#include "msrnnt/data/corpus.h"

#include <bit>
#include <fstream>

#include <nlohmann/json.hpp>

namespace msrnnt {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little,
              "feature I/O assumes a little-endian host");

std::string feature_filename(const std::string& id) { return id + ".f32"; }

void write_features(const std::filesystem::path& path, const Matrix<float>& m) {
  std::ofstream os(path, std::ios::binary);
  MSRNNT_CHECK(os.good(), "cannot write features: " << path.string());
  os.write(reinterpret_cast<const char*>(m.data()),
           static_cast<std::streamsize>(m.size() * sizeof(float)));
  MSRNNT_CHECK(os.good(), "feature write failed: " << path.string());
}

Matrix<float> read_features(const std::filesystem::path& path, int frames, int dim,
                            std::size_t record_index) {
  std::ifstream is(path, std::ios::binary);
  MSRNNT_CHECK_AS(is.good(), ParseError,
                  "record " << record_index << ": missing feature file "
                            << path.string());
  Matrix<float> m(frames, dim);
  is.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(m.size() * sizeof(float)));
  MSRNNT_CHECK_AS(is.gcount() ==
                      static_cast<std::streamsize>(m.size() * sizeof(float)),
                  ParseError,
                  "record " << record_index << ": feature file truncated: "
                            << path.string());
  return m;
}

}  // namespace

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.jsonl");
  MSRNNT_CHECK(manifest.good(), "cannot write manifest in " << dir.string());

  double overlap_sum = 0.0, duration_sum = 0.0;
  for (const MixtureExample& ex : corpus.examples) {
    overlap_sum += ex.overlap_s;
    duration_sum += ex.duration_s();
  }
  json header;
  header["format"] = "msrnnt-corpus";
  header["version"] = 1;
  header["feature_dim"] = corpus.feature_dim;
  header["frame_shift_ms"] = corpus.frame_shift_ms;
  header["vocabulary"] = corpus.vocabulary;
  header["examples"] = corpus.examples.size();
  header["overlap_ratio"] = duration_sum > 0.0 ? overlap_sum / duration_sum : 0.0;
  manifest << header.dump() << "\n";

  Vocabulary vocab(corpus.vocabulary);
  for (const MixtureExample& ex : corpus.examples) {
    MSRNNT_CHECK(ex.features.cols() == corpus.feature_dim,
                 "example " << ex.id << ": feature dim mismatch");
    json rec;
    rec["id"] = ex.id;
    rec["features"] = feature_filename(ex.id);
    rec["frames"] = ex.features.rows();
    std::vector<std::string> ref_strings;
    ref_strings.reserve(ex.refs.size());
    for (const TokenSequence& r : ex.refs) ref_strings.push_back(vocab.to_string(r));
    rec["refs"] = ref_strings;
    rec["delays_s"] = ex.delays_s;
    rec["durations_s"] = ex.durations_s;
    rec["overlap_s"] = ex.overlap_s;
    rec["overlap_ratio"] = ex.overlap_ratio;
    manifest << rec.dump() << "\n";
    write_features(dir / feature_filename(ex.id), ex.features);
  }
  MSRNNT_CHECK(manifest.good(), "manifest write failed in " << dir.string());
}

Corpus read_corpus(const std::filesystem::path& dir) {
  std::ifstream manifest(dir / "manifest.jsonl");
  MSRNNT_CHECK_AS(manifest.good(), ParseError,
                  "cannot open manifest in " << dir.string());

  Corpus corpus;
  std::string line;
  // Header line; an empty manifest yields an empty corpus.
  if (!std::getline(manifest, line) || line.find_first_not_of(" \t\r") == std::string::npos)
    return corpus;

  json header;
  try {
    header = json::parse(line);
    MSRNNT_CHECK_AS(header.at("format").get<std::string>() == "msrnnt-corpus",
                    ParseError, "not a msrnnt corpus manifest");
    corpus.feature_dim = header.at("feature_dim").get<int>();
    corpus.frame_shift_ms = header.at("frame_shift_ms").get<double>();
    corpus.vocabulary = header.at("vocabulary").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest header: ") + e.what());
  }

  Vocabulary vocab(corpus.vocabulary);
  std::size_t index = 0;
  while (std::getline(manifest, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    MixtureExample ex;
    int frames = 0;
    std::string feature_file;
    try {
      const json rec = json::parse(line);
      ex.id = rec.at("id").get<std::string>();
      feature_file = rec.at("features").get<std::string>();
      frames = rec.at("frames").get<int>();
      for (const std::string& r : rec.at("refs").get<std::vector<std::string>>())
        ex.refs.push_back(vocab.from_string(r));
      ex.delays_s = rec.at("delays_s").get<std::vector<double>>();
      ex.durations_s = rec.at("durations_s").get<std::vector<double>>();
      ex.overlap_s = rec.at("overlap_s").get<double>();
      ex.overlap_ratio = rec.at("overlap_ratio").get<double>();
    } catch (const json::exception& e) {
      throw ParseError("manifest record " + std::to_string(index) + ": " + e.what());
    }
    MSRNNT_CHECK_AS(ex.refs.size() == ex.delays_s.size() &&
                        ex.refs.size() == ex.durations_s.size(),
                    ParseError,
                    "manifest record " << index << ": ref/delay/duration counts differ");
    ex.frame_shift_ms = corpus.frame_shift_ms;
    ex.features = read_features(dir / feature_file, frames, corpus.feature_dim, index);
    corpus.examples.push_back(std::move(ex));
    ++index;
  }
  return corpus;
}

}  // namespace msrnnt
