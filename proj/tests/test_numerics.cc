// tests/test_numerics.cc

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
#include <fstream>
#include <iterator>
#include <limits>

#include "msrnnt/numerics/adam.h"
#include "msrnnt/numerics/checkpoint.h"
#include "msrnnt/numerics/logmath.h"
#include "msrnnt/numerics/lr_schedule.h"
#include "msrnnt/numerics/lstm.h"
#include "test_util.h"

using namespace msrnnt;

TEST_CASE("log_sum_exp basics") {
  const std::vector<double> two_zeros = {0.0, 0.0};
  CHECK(log_sum_exp<double>(two_zeros) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const std::vector<double> with_neutral = {kLogZero<double>, 1.25};
  CHECK(log_sum_exp<double>(with_neutral) == doctest::Approx(1.25).epsilon(1e-15));

  // Exact arithmetic with shifted exponents: lse(x, x) = x + ln 2.
  const std::vector<double> large = {1000.0, 1000.0};
  const double expect = 1000.0 + std::log(2.0);
  CHECK(log_sum_exp<double>(large) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(std::isfinite(log_sum_exp<double>(large)));

  const std::vector<double> all_zero_prob = {kLogZero<double>, kLogZero<double>};
  CHECK(log_sum_exp<double>(all_zero_prob) == kLogZero<double>);

  CHECK_THROWS_WITH_AS(log_sum_exp<double>(std::vector<double>{}), "empty reduction",
                       Error);

  CHECK(log_add(kLogZero<double>, -0.5) == doctest::Approx(-0.5));
  CHECK(log_add(0.0, 0.0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("lstm zero weights produce zero outputs") {
  LstmStack<double> stack("enc", 3, 2, 5);
  // Parameters default to zero; tanh(0) * sig(0) keeps every state at zero.
  Rng rng(1);
  Matrix<double> inputs = test::random_matrix(7, 3, rng);
  const Matrix<double> out = stack.forward(inputs, nullptr, nullptr);
  REQUIRE(out.rows() == 7);
  REQUIRE(out.cols() == 5);
  for (int t = 0; t < out.rows(); ++t)
    for (int j = 0; j < out.cols(); ++j) CHECK(out(t, j) == 0.0);
}

TEST_CASE("lstm single cell matches hand-computed arithmetic") {
  // One unit, one input; gates in [input, forget, cell, output] order with
  // W_ih = (0.1, 0.2, 0.3, 0.4), W_hh = (0.5, 0.6, 0.7, 0.8),
  // b = (0.01, 0.02, 0.03, 0.04), x0 = 0.5, x1 = -0.25, zero initial state.
  // Cell arithmetic done independently (sigmoid/tanh recurrences by hand):
  //   c1 = 0.09171084600490445,  h1 = 0.051188379608079627
  //   c2 = 0.041263551061359698, h2 = 0.020423680717042755
  LstmLayer<double> layer("cell", 1, 1);
  for (int g = 0; g < 4; ++g) {
    layer.w_ih.value(g, 0) = 0.1 * (g + 1);
    layer.w_hh.value(g, 0) = 0.1 * (g + 5);
    layer.b.value(0, g) = 0.01 * (g + 1);
  }
  Matrix<double> inputs(2, 1);
  inputs(0, 0) = 0.5;
  inputs(1, 0) = -0.25;

  LstmLayerTape<double> tape;
  std::vector<double> h(1, 0.0), c(1, 0.0);
  const Matrix<double> out = layer.forward(inputs, &h, &c, &tape);
  CHECK(out(0, 0) == doctest::Approx(0.051188379608079627).epsilon(1e-14));
  CHECK(out(1, 0) == doctest::Approx(0.020423680717042755).epsilon(1e-14));
  CHECK(c[0] == doctest::Approx(0.041263551061359698).epsilon(1e-14));
  CHECK(tape.c(0, 0) == doctest::Approx(0.09171084600490445).epsilon(1e-14));
}

TEST_CASE("lstm forward is causal under truncation") {
  Rng rng(7);
  LstmStack<double> stack("enc", 4, 2, 6);
  stack.init(rng);
  const Matrix<double> inputs = test::random_matrix(9, 4, rng);
  const Matrix<double> full = stack.forward(inputs, nullptr, nullptr);
  for (int cut = 1; cut <= 9; ++cut) {
    Matrix<double> prefix(cut, 4);
    for (int t = 0; t < cut; ++t)
      for (int c = 0; c < 4; ++c) prefix(t, c) = inputs(t, c);
    const Matrix<double> head = stack.forward(prefix, nullptr, nullptr);
    for (int t = 0; t < cut; ++t)
      for (int j = 0; j < 6; ++j) CHECK(head(t, j) == full(t, j));
  }
}

TEST_CASE("lstm shape error names the layer") {
  LstmStack<double> stack("enc", 4, 1, 6);
  Matrix<double> bad(3, 5);
  CHECK_THROWS_AS(stack.forward(bad, nullptr, nullptr), ShapeError);
  try {
    stack.forward(bad, nullptr, nullptr);
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("enc.layer0") != std::string::npos);
  }
}

TEST_CASE("lstm backward matches central finite differences") {
  // J = <G, outputs> for fixed random G; reverse-mode grads of weights and
  // inputs against (J(x+h) - J(x-h)) / 2h.
  Rng rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int frames = rng.uniform_int(1, 4);
    const int input_dim = rng.uniform_int(1, 3);
    const int hidden = rng.uniform_int(1, 4);
    const int layers = rng.uniform_int(1, 2);
    LstmStack<double> stack("enc", input_dim, layers, hidden);
    stack.init(rng);
    Matrix<double> inputs = test::random_matrix(frames, input_dim, rng);
    const Matrix<double> weights = test::random_matrix(frames, hidden, rng);

    auto objective = [&]() {
      const Matrix<double> out = stack.forward(inputs, nullptr, nullptr);
      double j = 0.0;
      for (int t = 0; t < frames; ++t)
        for (int k = 0; k < hidden; ++k) j += weights(t, k) * out(t, k);
      return j;
    };

    LstmTape<double> tape;
    stack.forward(inputs, nullptr, &tape);
    stack.for_each_parameter([](Parameter<double>& p) { p.zero_grad(); });
    const Matrix<double> d_inputs = stack.backward(tape, weights);

    const double h = 1e-5;
    std::vector<Parameter<double>*> params;
    stack.for_each_parameter([&params](Parameter<double>& p) { params.push_back(&p); });
    for (int probe = 0; probe < 10; ++probe) {
      Parameter<double>* p = params[rng.uniform_int(0, static_cast<int>(params.size()) - 1)];
      const int idx = rng.uniform_int(0, static_cast<int>(p->value.size()) - 1);
      double& v = p->value.data()[idx];
      const double saved = v;
      v = saved + h;
      const double up = objective();
      v = saved - h;
      const double down = objective();
      v = saved;
      worst = std::max(worst, test::rel_err((up - down) / (2 * h), p->grad.data()[idx]));
    }
    for (int probe = 0; probe < 5; ++probe) {
      const int t = rng.uniform_int(0, frames - 1);
      const int c = rng.uniform_int(0, input_dim - 1);
      const double saved = inputs(t, c);
      inputs(t, c) = saved + h;
      const double up = objective();
      inputs(t, c) = saved - h;
      const double down = objective();
      inputs(t, c) = saved;
      worst = std::max(worst, test::rel_err((up - down) / (2 * h), d_inputs(t, c)));
    }
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("lstm backward linearity") {
  Rng rng(13);
  LstmStack<double> stack("enc", 3, 1, 4);
  stack.init(rng);
  const Matrix<double> inputs = test::random_matrix(5, 3, rng);
  LstmTape<double> tape;
  stack.forward(inputs, nullptr, &tape);

  Matrix<double> zero_grad(5, 4);
  stack.for_each_parameter([](Parameter<double>& p) { p.zero_grad(); });
  const Matrix<double> din_zero = stack.backward(tape, zero_grad);
  for (int t = 0; t < 5; ++t)
    for (int c = 0; c < 3; ++c) CHECK(din_zero(t, c) == 0.0);
  stack.for_each_parameter([](Parameter<double>& p) {
    for (std::size_t i = 0; i < p.grad.size(); ++i) CHECK(p.grad.data()[i] == 0.0);
  });

  // Scaling the output gradient scales every input gradient by the same c.
  Matrix<double> g = test::random_matrix(5, 4, rng);
  stack.for_each_parameter([](Parameter<double>& p) { p.zero_grad(); });
  const Matrix<double> din = stack.backward(tape, g);
  Matrix<double> g3 = g;
  for (std::size_t i = 0; i < g3.size(); ++i) g3.data()[i] *= 3.0;
  stack.for_each_parameter([](Parameter<double>& p) { p.zero_grad(); });
  const Matrix<double> din3 = stack.backward(tape, g3);
  for (int t = 0; t < 5; ++t)
    for (int c = 0; c < 3; ++c)
      CHECK(din3(t, c) == doctest::Approx(3.0 * din(t, c)).epsilon(1e-12));
}

TEST_CASE("lr schedule ramp, hold, decay") {
  LrSchedule s;
  s.warmup_steps = 10;
  s.hold_steps = 5;
  s.decay_steps = 100;
  s.peak_lr = 1.0;
  s.floor_lr = 0.1;
  s.validate();

  CHECK(lr_at(s, 0) == doctest::Approx(0.1));  // (0+1)/10 * peak
  CHECK(lr_at(s, 9) == doctest::Approx(1.0));
  CHECK(lr_at(s, 10) == doctest::Approx(1.0));
  CHECK(lr_at(s, 15) == doctest::Approx(1.0));  // warmup+hold boundary
  // Continuity at both boundaries.
  CHECK(std::abs(lr_at(s, 10) - lr_at(s, 9)) <= 1e-12);
  CHECK(std::abs(lr_at(s, 15) - lr_at(s, 16)) <= (1.0 - 0.1) * (1 - std::exp2(-0.01)) + 1e-12);
  // Half-life: peak->floor midpoint after decay_steps.
  CHECK(lr_at(s, 115) == doctest::Approx(0.1 + 0.9 * 0.5));
  // Monotone on each phase; floor in the limit.
  for (int step = 16; step < 2000; ++step) CHECK(lr_at(s, step) <= lr_at(s, step - 1));
  CHECK(lr_at(s, 100000) == doctest::Approx(0.1).epsilon(1e-9));

  LrSchedule bad = s;
  bad.decay_steps = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("adam zero gradients leave parameters unchanged") {
  Parameter<double> p("w", 2, 3);
  Rng rng(3);
  p.init_uniform(rng);
  const std::vector<double> before(p.value.data(), p.value.data() + p.value.size());
  AdamOptimizer<double> opt(AdamOptions{}, {&p});
  opt.zero_grad();
  opt.step(0.1);
  CHECK(opt.step_count() == 1);
  for (std::size_t i = 0; i < p.value.size(); ++i)
    CHECK(p.value.data()[i] == before[i]);
}

TEST_CASE("adam degenerate moments match the closed form") {
  // beta1 = beta2 = 0: m = g, v = g^2, update = lr * g / (|g| + eps).
  Parameter<double> p("w", 1, 1);
  p.value(0, 0) = 2.0;
  p.grad(0, 0) = 1.0;
  AdamOptions opts;
  opts.beta1 = 0.0;
  opts.beta2 = 0.0;
  opts.epsilon = 1e-8;
  AdamOptimizer<double> opt(opts, {&p});
  opt.step(0.5);
  CHECK(p.value(0, 0) == doctest::Approx(2.0 - 0.5 * 1.0 / (1.0 + 1e-8)).epsilon(1e-15));
}

TEST_CASE("adam rejects non-finite gradients by name") {
  Parameter<double> p("mixenc.layer0.w_ih", 1, 2);
  p.grad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  AdamOptimizer<double> opt(AdamOptions{}, {&p});
  try {
    opt.step(0.1);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("mixenc.layer0.w_ih") != std::string::npos);
  }
}

TEST_CASE("adam runs are deterministic") {
  auto run = [] {
    Rng rng(5);
    Parameter<double> p("w", 4, 4);
    p.init_uniform(rng);
    AdamOptimizer<double> opt(AdamOptions{}, {&p});
    for (int step = 0; step < 25; ++step) {
      for (std::size_t i = 0; i < p.grad.size(); ++i)
        p.grad.data()[i] = rng.uniform(-1.0, 1.0);
      opt.step(0.01);
    }
    return std::vector<double>(p.value.data(), p.value.data() + p.value.size());
  };
  const auto a = run();
  const auto b = run();
  CHECK(a == b);  // bit-identical
}

TEST_CASE("gradient clipping scales to the requested norm") {
  Parameter<double> p("w", 1, 2);
  p.grad(0, 0) = 3.0;
  p.grad(0, 1) = 4.0;
  AdamOptimizer<double> opt(AdamOptions{}, {&p});
  const double norm = opt.clip_global_norm(1.0);
  CHECK(norm == doctest::Approx(5.0));
  CHECK(std::hypot(p.grad(0, 0), p.grad(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("checkpoint round-trip and error paths") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "msrnnt_ckpt_test";
  fs::create_directories(dir);
  const fs::path path = dir / "model.ckpt";

  CheckpointMap map;
  map["a.w"] = {{2, 3}, {1, 2, 3, 4, 5, 6}};
  map["b.b"] = {{1, 2}, {-0.5f, 0.25f}};
  write_checkpoint(path, "{\"k\":1}", map);

  const auto [config, loaded] = read_checkpoint(path);
  CHECK(config == "{\"k\":1}");
  REQUIRE(loaded.size() == 2);
  CHECK(loaded.at("a.w").dims == std::vector<int>{2, 3});
  CHECK(loaded.at("a.w").values == map.at("a.w").values);
  CHECK(loaded.at("b.b").values == map.at("b.b").values);

  // Truncation is a parse error, not a crash.
  {
    std::ifstream is(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(is)),
                      std::istreambuf_iterator<char>());
    std::ofstream os(dir / "trunc.ckpt", std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  }
  CHECK_THROWS_AS(read_checkpoint(dir / "trunc.ckpt"), ParseError);
  CHECK_THROWS_AS(read_checkpoint(dir / "missing.ckpt"), ParseError);
}
