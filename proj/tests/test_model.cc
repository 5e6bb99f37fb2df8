// tests/test_model.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "msrnnt/model/ms_rnnt.h"
#include "test_util.h"

using namespace msrnnt;

namespace {

// Copies every parameter of src into dst by name.
void share_weights(MsRnntModel<double>& src, MsRnntModel<double>& dst) {
  dst.load_checkpoint(src.to_checkpoint());
}

double max_abs_diff(const Matrix<double>& a, const Matrix<double>& b) {
  REQUIRE(a.same_shape(b));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

}  // namespace

TEST_CASE("speaker order vectors are one-hot") {
  CHECK(speaker_order_vector<double>(1, 2) == std::vector<double>{1.0, 0.0});
  CHECK(speaker_order_vector<double>(2, 2) == std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(speaker_order_vector<double>(0, 2), Error);
  CHECK_THROWS_AS(speaker_order_vector<double>(3, 2), Error);
}

TEST_CASE("frame stacking is causal with ceil(frames/factor) rows") {
  Matrix<double> x(7, 2);
  for (int t = 0; t < 7; ++t) {
    x(t, 0) = t + 1;
    x(t, 1) = -(t + 1);
  }
  const Matrix<double> stacked = MsRnntModel<double>::stack_frames(x, 3);
  REQUIRE(stacked.rows() == 3);  // ceil(7/3)
  REQUIRE(stacked.cols() == 6);
  // Row 0 covers frames [-2, 0]: zero padding then frame 0.
  CHECK(stacked(0, 0) == 0.0);
  CHECK(stacked(0, 2) == 0.0);
  CHECK(stacked(0, 4) == 1.0);
  CHECK(stacked(0, 5) == -1.0);
  // Row 1 covers frames [1, 3].
  CHECK(stacked(1, 0) == 2.0);
  CHECK(stacked(1, 2) == 3.0);
  CHECK(stacked(1, 4) == 4.0);
  // Row 2 covers frames [4, 6].
  CHECK(stacked(2, 0) == 5.0);
  CHECK(stacked(2, 4) == 7.0);
}

TEST_CASE("encode is causal end to end") {
  Rng rng(3);
  MsRnntModel<double> model(test::tiny_config(2, true));
  model.init(rng);
  const int frames = 11;
  const Matrix<double> x = test::random_matrix(frames, 3, rng);
  const auto full = model.encode(x, nullptr);

  for (int cut = 1; cut <= frames; ++cut) {
    Matrix<double> prefix(cut, 3);
    for (int t = 0; t < cut; ++t)
      for (int c = 0; c < 3; ++c) prefix(t, c) = x(t, c);
    const auto head = model.encode(prefix, nullptr);
    const int rows = (cut + 1) / 2;  // ceil(cut / downsample_factor=2)
    for (int s = 0; s < 2; ++s) {
      REQUIRE(head[s].rows() == rows);
      for (int t = 0; t < rows; ++t)
        for (int c = 0; c < head[s].cols(); ++c)
          CHECK(head[s](t, c) == full[s](t, c));  // bit-exact
    }
  }
}

TEST_CASE("identical SD weights give identical branches without order labels") {
  Rng rng(5);
  MsRnntModel<double> model(test::tiny_config(2, false));
  model.init(rng);
  // Overwrite branch 1's SD weights with branch 0's.
  for (int layer = 0; layer < model.sd_encoder(0).num_layers(); ++layer) {
    auto& src = model.sd_encoder(0).layer(layer);
    auto& dst = model.sd_encoder(1).layer(layer);
    dst.w_ih.value = src.w_ih.value;
    dst.w_hh.value = src.w_hh.value;
    dst.b.value = src.b.value;
  }
  const Matrix<double> x = test::random_matrix(9, 3, rng);
  const auto branches = model.encode(x, nullptr);
  CHECK(max_abs_diff(branches[0], branches[1]) == 0.0);
}

TEST_CASE("order labels break branch symmetry for identical SD weights") {
  Rng rng(7);
  MsRnntModel<double> model(test::tiny_config(2, true));
  model.init(rng);
  for (int layer = 0; layer < model.sd_encoder(0).num_layers(); ++layer) {
    auto& src = model.sd_encoder(0).layer(layer);
    auto& dst = model.sd_encoder(1).layer(layer);
    dst.w_ih.value = src.w_ih.value;
    dst.w_hh.value = src.w_hh.value;
    dst.b.value = src.b.value;
  }
  const Matrix<double> x = test::random_matrix(9, 3, rng);
  const auto branches = model.encode(x, nullptr);
  CHECK(max_abs_diff(branches[0], branches[1]) > 1e-8);
}

TEST_CASE("prediction features: rows, causality, zero weights") {
  Rng rng(9);
  MsRnntConfig cfg = test::tiny_config(1, false);
  MsRnntModel<double> model(cfg);
  model.init(rng);

  const Matrix<double> empty = model.prediction_features({}, nullptr);
  CHECK(empty.rows() == 1);

  const TokenSequence labels = {0, 2, 1};
  const Matrix<double> full = model.prediction_features(labels, nullptr);
  REQUIRE(full.rows() == 4);
  const Matrix<double> prefix = model.prediction_features({0, 2}, nullptr);
  for (int u = 0; u < prefix.rows(); ++u)
    for (int c = 0; c < prefix.cols(); ++c) CHECK(prefix(u, c) == full(u, c));

  MsRnntModel<double> zero_model(cfg);  // all-zero parameters
  const Matrix<double> rows = zero_model.prediction_features(labels, nullptr);
  for (int u = 1; u < rows.rows(); ++u)
    for (int c = 0; c < rows.cols(); ++c) CHECK(rows(u, c) == rows(0, c));

  CHECK_THROWS_AS(model.prediction_features({cfg.vocab_size()}, nullptr), Error);
}

TEST_CASE("S=1 MS model equals a hand-chained single-speaker pipeline") {
  Rng rng(11);
  MsRnntConfig cfg = test::tiny_config(1, false);
  MsRnntModel<double> model(cfg);
  model.init(rng);
  const Matrix<double> x = test::random_matrix(10, 3, rng);

  // Reference pipeline: stack -> mixenc -> sdenc0 -> recenc -> projection,
  // composed manually from the same primitives.
  const Matrix<double> stacked = MsRnntModel<double>::stack_frames(x, cfg.downsample_factor);
  const Matrix<double> mix = model.mixture_encoder().forward(stacked, nullptr, nullptr);
  const Matrix<double> sd = model.sd_encoder(0).forward(mix, nullptr, nullptr);
  const Matrix<double> rec = model.recognition_encoder().forward(sd, nullptr, nullptr);
  const Matrix<double> manual = model.recognition_proj().forward(rec);

  const auto branches = model.encode(x, nullptr);
  REQUIRE(branches.size() == 1);
  CHECK(max_abs_diff(branches[0], manual) == 0.0);  // bit-identical
}

TEST_CASE("shared modules touch every branch, SD modules only their own") {
  Rng rng(13);
  MsRnntModel<double> model(test::tiny_config(2, false));
  model.init(rng);
  const Matrix<double> x = test::random_matrix(8, 3, rng);
  const auto before = model.encode(x, nullptr);

  SUBCASE("recognition encoder is shared") {
    model.recognition_encoder().layer(0).b.value(0, 0) += 0.5;
    const auto after = model.encode(x, nullptr);
    CHECK(max_abs_diff(before[0], after[0]) > 0.0);
    CHECK(max_abs_diff(before[1], after[1]) > 0.0);
  }
  SUBCASE("sd encoder 1 only affects branch 1") {
    model.sd_encoder(1).layer(0).b.value(0, 0) += 0.5;
    const auto after = model.encode(x, nullptr);
    CHECK(max_abs_diff(before[0], after[0]) == 0.0);
    CHECK(max_abs_diff(before[1], after[1]) > 0.0);
  }
  SUBCASE("mixture encoder feeds both branches") {
    model.mixture_encoder().layer(0).b.value(0, 0) += 0.5;
    const auto after = model.encode(x, nullptr);
    CHECK(max_abs_diff(before[0], after[0]) > 0.0);
    CHECK(max_abs_diff(before[1], after[1]) > 0.0);
  }
}

TEST_CASE("encode rejects wrong feature dims naming the stage") {
  MsRnntModel<double> model(test::tiny_config(1, false));
  Matrix<double> bad(5, 4);
  CHECK_THROWS_AS(model.encode(bad, nullptr), ShapeError);
}

TEST_CASE("seed transfer copies, noises, or zero-extends as configured") {
  Rng rng(17);
  MsRnntConfig seed_cfg = test::tiny_config(1, false);
  MsRnntModel<double> seed(seed_cfg);
  seed.init(rng);

  SUBCASE("S=1 transfer is bit-exact") {
    Rng t(1);
    MsRnntModel<double> copy =
        MsRnntModel<double>::init_from_seed(seed, seed_cfg, t);
    const CheckpointMap a = seed.to_checkpoint();
    const CheckpointMap b = copy.to_checkpoint();
    REQUIRE(a.size() == b.size());
    for (const auto& [name, entry] : a) CHECK(entry.values == b.at(name).values);
  }

  SUBCASE("order labels: non-label weights bit-equal, label columns zero") {
    MsRnntConfig cfg = test::tiny_config(2, true);
    Rng t(2);
    MsRnntModel<double> model = MsRnntModel<double>::init_from_seed(seed, cfg, t);
    const auto& seed_w = seed.sd_encoder(0).layer(0).w_ih.value;
    for (int s = 0; s < 2; ++s) {
      const auto& w = model.sd_encoder(s).layer(0).w_ih.value;
      REQUIRE(w.cols() == seed_w.cols() + 2);
      for (int r = 0; r < w.rows(); ++r) {
        for (int c = 0; c < seed_w.cols(); ++c) CHECK(w(r, c) == seed_w(r, c));
        CHECK(w(r, seed_w.cols()) == 0.0);
        CHECK(w(r, seed_w.cols() + 1) == 0.0);
      }
    }
    // Shared modules are bit-equal too.
    CHECK(max_abs_diff(model.mixture_encoder().layer(0).w_ih.value,
                       seed.mixture_encoder().layer(0).w_ih.value) == 0.0);
  }

  SUBCASE("no order labels: SD branches differ from each other and the seed") {
    MsRnntConfig cfg = test::tiny_config(2, false);
    Rng t(3);
    MsRnntModel<double> model = MsRnntModel<double>::init_from_seed(seed, cfg, t);
    CHECK(max_abs_diff(model.sd_encoder(0).layer(0).w_ih.value,
                       model.sd_encoder(1).layer(0).w_ih.value) > 0.0);
    CHECK(max_abs_diff(model.sd_encoder(0).layer(0).w_ih.value,
                       seed.sd_encoder(0).layer(0).w_ih.value) > 0.0);
    // Shared modules still bit-equal.
    CHECK(max_abs_diff(model.prediction_proj().w.value,
                       seed.prediction_proj().w.value) == 0.0);
  }

  SUBCASE("topology mismatch is rejected") {
    MsRnntConfig cfg = test::tiny_config(2, false);
    cfg.joint_hidden_dim += 1;
    Rng t(4);
    CHECK_THROWS_AS(MsRnntModel<double>::init_from_seed(seed, cfg, t), Error);
  }
}

TEST_CASE("model checkpoint round-trip preserves outputs") {
  namespace fs = std::filesystem;
  Rng rng(19);
  MsRnntModel<double> model(test::tiny_config(2, true));
  model.init(rng);
  const fs::path path = fs::temp_directory_path() / "msrnnt_model_test.ckpt";
  save_model(path, model);
  MsRnntModel<double> loaded = load_model<double>(path);
  CHECK(loaded.config() == model.config());

  const Matrix<double> x = test::random_matrix(7, 3, rng);
  const auto a = model.encode(x, nullptr);
  const auto b = loaded.encode(x, nullptr);
  // float32 storage rounds double weights; outputs agree to float precision.
  for (int s = 0; s < 2; ++s) CHECK(max_abs_diff(a[s], b[s]) < 1e-5);

  // Float-precision weights survive the round trip bit-exactly.
  MsRnntModel<float> fmodel(test::tiny_config(2, true));
  Rng rng2(21);
  fmodel.init(rng2);
  save_model(path, fmodel);
  MsRnntModel<float> floaded = load_model<float>(path);
  const CheckpointMap ca = fmodel.to_checkpoint();
  const CheckpointMap cb = floaded.to_checkpoint();
  for (const auto& [name, entry] : ca) CHECK(entry.values == cb.at(name).values);
}

TEST_CASE("forward_lattices shapes for full pairing") {
  Rng rng(23);
  MsRnntModel<double> model(test::tiny_config(2, false));
  model.init(rng);
  const Matrix<double> x = test::random_matrix(8, 3, rng);
  const std::vector<TokenSequence> targets = {{0, 1}, {2}};

  const auto identity = model.forward_lattices(x, targets, {0, 1});
  REQUIRE(identity.size() == 2);
  CHECK(identity[0].dim0() == 4);  // ceil(8/2)
  CHECK(identity[0].dim1() == 3);  // U=2 + 1
  CHECK(identity[0].dim2() == 4);  // V=3 + blank
  CHECK(identity[1].dim1() == 2);

  const auto swapped = model.forward_lattices(x, targets, {1, 0});
  CHECK(swapped[0].dim1() == 2);
  CHECK(swapped[1].dim1() == 3);
}

TEST_CASE("share_weights helper gives bit-identical encodes") {
  Rng rng(29);
  MsRnntModel<double> a(test::tiny_config(2, false));
  a.init(rng);
  MsRnntModel<double> b(test::tiny_config(2, false));
  share_weights(a, b);
  const Matrix<double> x = test::random_matrix(6, 3, rng);
  const auto ea = a.encode(x, nullptr);
  const auto eb = b.encode(x, nullptr);
  for (int s = 0; s < 2; ++s) CHECK(max_abs_diff(ea[s], eb[s]) == 0.0);
}
