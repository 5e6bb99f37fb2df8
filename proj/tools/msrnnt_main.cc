// tools/msrnnt_main.cc

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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "msrnnt/data/synth.h"
#include "msrnnt/eval/wer.h"
#include "msrnnt/model/ms_rnnt.h"
#include "msrnnt/training/selfcheck.h"
#include "msrnnt/training/trainer.h"

namespace msrnnt {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

json load_json_file(const fs::path& path) {
  std::ifstream is(path);
  MSRNNT_CHECK_AS(is.good(), ParseError, "cannot open config: " << path.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string out_dir;
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
};

ToyCorpusConfig parse_sim_config(const json& j) {
  ToyCorpusConfig cfg;
  try {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("vocab_size")) cfg.vocab_size = j.at("vocab_size").get<int>();
    if (j.contains("feature_dim")) cfg.feature_dim = j.at("feature_dim").get<int>();
    if (j.contains("frames_per_token"))
      cfg.frames_per_token = j.at("frames_per_token").get<int>();
    if (j.contains("transcript_len_min"))
      cfg.transcript_len_min = j.at("transcript_len_min").get<int>();
    if (j.contains("transcript_len_max"))
      cfg.transcript_len_max = j.at("transcript_len_max").get<int>();
    if (j.contains("noise_sigma")) cfg.noise_sigma = j.at("noise_sigma").get<float>();
    if (j.contains("template_jitter"))
      cfg.template_jitter = j.at("template_jitter").get<float>();
    if (j.contains("frame_shift_ms"))
      cfg.frame_shift_ms = j.at("frame_shift_ms").get<double>();
    if (j.contains("train_min_delay_s"))
      cfg.train_min_delay_s = j.at("train_min_delay_s").get<double>();
    if (j.contains("eval_min_delay_s"))
      cfg.eval_min_delay_s = j.at("eval_min_delay_s").get<double>();
    if (j.contains("delay_fraction"))
      cfg.delay_fraction = j.at("delay_fraction").get<double>();
    if (j.contains("eval_delay_fraction"))
      cfg.eval_delay_fraction = j.at("eval_delay_fraction").get<double>();
    if (j.contains("train_single")) cfg.train_single = j.at("train_single").get<int>();
    if (j.contains("dev_single")) cfg.dev_single = j.at("dev_single").get<int>();
    if (j.contains("test_single")) cfg.test_single = j.at("test_single").get<int>();
    if (j.contains("train_multi")) cfg.train_multi = j.at("train_multi").get<int>();
    if (j.contains("dev_multi")) cfg.dev_multi = j.at("dev_multi").get<int>();
    if (j.contains("test_multi")) cfg.test_multi = j.at("test_multi").get<int>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("simulate config: ") + e.what());
  }
  return cfg;
}

int run_simulate(const SimulateArgs& args) {
  ToyCorpusConfig cfg;
  if (!args.config_path.empty()) cfg = parse_sim_config(load_json_file(args.config_path));
  if (args.seed_override) cfg.seed = *args.seed_override;
  MSRNNT_CHECK(!args.out_dir.empty(), "simulate: --out is required");

  generate_toy_corpora(cfg, args.out_dir);
  for (const char* split : {"train_2spk", "dev_2spk", "test_2spk"}) {
    const Corpus corpus = read_corpus(fs::path(args.out_dir) / split);
    std::cout << split << ": " << corpus.size() << " mixtures, overlap ratio "
              << corpus_overlap_ratio(corpus.examples) << "\n";
  }
  for (const char* split : {"train_1spk", "dev_1spk", "test_1spk"}) {
    const Corpus corpus = read_corpus(fs::path(args.out_dir) / split);
    std::cout << split << ": " << corpus.size() << " utterances\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 17;
  std::string precision = "f64";  // f32 | f64
  AssignmentMode mode = AssignmentMode::kPit;
  TrainLoopOptions loop;
  MsRnntConfig model;
  std::string train_single, train_multi, dev;
  std::string seed_checkpoint;
  std::string out_dir = ".";
};

AssignmentMode parse_mode(const std::string& text) {
  if (text == "pit") return AssignmentMode::kPit;
  if (text == "dat") return AssignmentMode::kDat;
  throw Error("mode must be 'pit' or 'dat', got '" + text + "'");
}

ExperimentConfig parse_experiment(const json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("precision")) cfg.precision = j.at("precision").get<std::string>();
    cfg.mode = parse_mode(j.value("mode", "pit"));
    cfg.loop.mode = cfg.mode;
    cfg.loop.seed = cfg.seed;
    if (j.contains("mix_fraction"))
      cfg.loop.mix_fraction = j.at("mix_fraction").get<double>();
    if (j.contains("batch_size")) cfg.loop.batch_size = j.at("batch_size").get<int>();
    if (j.contains("max_steps"))
      cfg.loop.max_steps = j.at("max_steps").get<std::int64_t>();
    if (j.contains("eval_every"))
      cfg.loop.eval_every = j.at("eval_every").get<std::int64_t>();
    if (j.contains("clip_norm")) cfg.loop.clip_norm = j.at("clip_norm").get<double>();
    if (j.contains("max_symbols_per_frame"))
      cfg.loop.max_symbols_per_frame = j.at("max_symbols_per_frame").get<int>();
    if (j.contains("schedule")) {
      const json& s = j.at("schedule");
      cfg.loop.schedule.warmup_steps = s.value("warmup_steps", std::int64_t{0});
      cfg.loop.schedule.hold_steps = s.value("hold_steps", std::int64_t{0});
      cfg.loop.schedule.decay_steps = s.value("decay_steps", std::int64_t{1});
      cfg.loop.schedule.peak_lr = s.value("peak_lr", 1e-3);
      cfg.loop.schedule.floor_lr = s.value("floor_lr", 0.0);
    }
    if (j.contains("adam")) {
      const json& a = j.at("adam");
      cfg.loop.adam.beta1 = a.value("beta1", 0.9);
      cfg.loop.adam.beta2 = a.value("beta2", 0.999);
      cfg.loop.adam.epsilon = a.value("epsilon", 1e-8);
    }
    const json& corpora = j.at("corpora");
    cfg.train_single = corpora.value("train_single", "");
    cfg.train_multi = corpora.value("train_multi", "");
    cfg.dev = corpora.value("dev", "");
    cfg.seed_checkpoint = j.value("seed_checkpoint", "");
    cfg.out_dir = j.value("out_dir", ".");

    // The model block may omit the vocabulary; it is then taken from the
    // first available training corpus.
    json model_json = j.at("model");
    if (!model_json.contains("vocabulary")) {
      const std::string probe = !cfg.train_multi.empty() ? cfg.train_multi : cfg.train_single;
      MSRNNT_CHECK(!probe.empty(), "no corpus to take the vocabulary from");
      model_json["vocabulary"] = read_corpus(probe).vocabulary;
    }
    cfg.model = MsRnntConfig::from_json(model_json.dump());
  } catch (const json::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  return cfg;
}

std::string mode_tag(AssignmentMode mode) {
  return mode == AssignmentMode::kPit ? "pit" : "dat";
}

template <typename T>
int run_train_typed(const ExperimentConfig& cfg) {
  Rng rng(cfg.seed);

  const Corpus train_single =
      cfg.train_single.empty() ? Corpus{} : read_corpus(cfg.train_single);
  const Corpus train_multi =
      cfg.train_multi.empty() ? Corpus{} : read_corpus(cfg.train_multi);
  std::optional<Corpus> dev;
  if (!cfg.dev.empty()) dev = read_corpus(cfg.dev);

  MsRnntModel<T> model(cfg.model);
  if (!cfg.seed_checkpoint.empty()) {
    const MsRnntModel<T> seed = load_model<T>(cfg.seed_checkpoint);
    Rng seed_rng = rng.derive(0x73656564ULL);  // "seed"
    model = MsRnntModel<T>::init_from_seed(seed, cfg.model, seed_rng);
  } else {
    Rng init_rng = rng.derive(0x696e6974ULL);  // "init"
    model.init(init_rng);
  }

  fs::create_directories(cfg.out_dir);
  const std::string stem = cfg.name + "_" + mode_tag(cfg.mode);
  const fs::path metrics_path = fs::path(cfg.out_dir) / (stem + "_metrics.csv");
  const fs::path ckpt_path = fs::path(cfg.out_dir) / (stem + "_best.ckpt");

  std::ofstream metrics(metrics_path);
  MSRNNT_CHECK(metrics.good(), "cannot write metrics: " << metrics_path.string());
  metrics << "step,loss,lr,grad_norm,perm_histogram\n";

  std::int64_t last_good_step = 0;
  try {
    const TrainResult result = train_loop<T>(
        model, &train_single, &train_multi, dev ? &*dev : nullptr, cfg.loop,
        [&metrics, &last_good_step](const std::string& line) {
          metrics << line << "\n";
          ++last_good_step;
        });
    write_checkpoint(ckpt_path, cfg.model.to_json(), result.best_params);
    std::cout << "steps: " << result.steps_run << "\n";
    if (result.best_dev_wer >= 0.0)
      std::cout << "best dev wer: " << result.best_dev_wer << " at step "
                << result.best_step << "\n";
    std::cout << "checkpoint: " << ckpt_path.string() << "\n";
    std::cout << "metrics: " << metrics_path.string() << "\n";
  } catch (const NumericError& e) {
    std::cerr << "training diverged: " << e.what() << " (last good step "
              << last_good_step << ")\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int run_train(const std::string& config_path,
              const std::optional<std::string>& mode_override,
              const std::optional<std::int64_t>& max_steps_override,
              const std::optional<std::string>& out_override,
              const std::optional<std::uint64_t>& seed_override) {
  ExperimentConfig cfg = parse_experiment(load_json_file(config_path));
  if (mode_override) {
    cfg.mode = parse_mode(*mode_override);
    cfg.loop.mode = cfg.mode;
  }
  if (max_steps_override) cfg.loop.max_steps = *max_steps_override;
  if (out_override) cfg.out_dir = *out_override;
  if (seed_override) {
    cfg.seed = *seed_override;
    cfg.loop.seed = *seed_override;
  }
  MSRNNT_CHECK(cfg.precision == "f32" || cfg.precision == "f64",
               "precision must be f32 or f64");
  if (cfg.precision == "f32") return run_train_typed<float>(cfg);
  return run_train_typed<double>(cfg);
}

// ---------------------------------------------------------------------------
// decode

int run_decode(const std::string& checkpoint_path, const std::string& corpus_dir,
               const std::string& out_path, int max_symbols) {
  const MsRnntModel<double> model = load_model<double>(checkpoint_path);
  const Corpus corpus = read_corpus(corpus_dir);
  MSRNNT_CHECK(corpus.feature_dim == model.config().feature_dim,
               "corpus feature dim " << corpus.feature_dim
                                     << " does not match checkpoint "
                                     << model.config().feature_dim);
  const Vocabulary vocab(model.config().vocabulary);

  std::ofstream os(out_path);
  MSRNNT_CHECK(os.good(), "cannot write hypotheses: " << out_path);
  auto stepper = model.make_stepper();
  for (const MixtureExample& example : corpus.examples) {
    const Matrix<double> features = matrix_cast<double>(example.features);
    const std::vector<Matrix<double>> branches = model.encode(features, nullptr);
    for (std::size_t k = 0; k < branches.size(); ++k) {
      const Hypothesis hyp =
          greedy_decode(branches[k], *stepper, model.joint(), max_symbols);
      os << example.id << '\t' << k << '\t' << vocab.to_string(hyp.tokens) << '\n';
    }
  }
  MSRNNT_CHECK(os.good(), "hypothesis write failed: " << out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// score

std::vector<std::pair<std::string, std::vector<TokenSequence>>> read_hypotheses(
    const fs::path& path, const Vocabulary& vocab) {
  std::ifstream is(path);
  MSRNNT_CHECK_AS(is.good(), ParseError, "cannot open hypotheses: " << path.string());
  std::vector<std::pair<std::string, std::vector<TokenSequence>>> grouped;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t tab1 = line.find('\t');
    MSRNNT_CHECK_AS(tab1 != std::string::npos, ParseError,
                    "hypothesis line " << line_no << ": expected id<TAB>index<TAB>tokens");
    const std::size_t tab2 = line.find('\t', tab1 + 1);
    MSRNNT_CHECK_AS(tab2 != std::string::npos, ParseError,
                    "hypothesis line " << line_no << ": expected id<TAB>index<TAB>tokens");
    const std::string id = line.substr(0, tab1);
    const std::string tokens = line.substr(tab2 + 1);
    auto [it, inserted] = index.emplace(id, grouped.size());
    if (inserted) grouped.emplace_back(id, std::vector<TokenSequence>{});
    grouped[it->second].second.push_back(vocab.from_string(tokens));
  }
  return grouped;
}

int run_score(const std::string& refs_dir, const std::string& hyps_path,
              const std::string& out_path) {
  const Corpus corpus = read_corpus(refs_dir);
  const Vocabulary vocab(corpus.vocabulary);
  std::vector<std::pair<std::string, std::vector<TokenSequence>>> refs;
  refs.reserve(corpus.size());
  for (const MixtureExample& example : corpus.examples)
    refs.emplace_back(example.id, example.refs);

  const auto hyps = read_hypotheses(hyps_path, vocab);
  const WerReport report = corpus_wer(refs, hyps);

  std::ofstream os(out_path);
  MSRNNT_CHECK(os.good(), "cannot write report: " << out_path);
  write_wer_report(report, os);
  MSRNNT_CHECK(os.good(), "report write failed: " << out_path);
  std::cout << "wer: " << report.wer() << " (" << report.totals.sub << " sub, "
            << report.totals.ins << " ins, " << report.totals.del << " del / "
            << report.ref_len_total << " ref tokens)\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// selfcheck

int run_selfcheck_cmd(bool inject_lattice_bug, std::uint64_t seed) {
  SelfcheckOptions options;
  options.inject_lattice_bug = inject_lattice_bug;
  options.seed = seed;
  const std::vector<CheckResult> results = run_selfcheck(options);
  bool all_passed = true;
  for (const CheckResult& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
              << "\n";
    all_passed = all_passed && r.passed;
  }
  return all_passed ? kExitOk : kExitNumeric;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Streaming multi-speaker RNN-T: simulation, training, decoding, scoring"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate the toy corpora");
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();
  simulate->add_option("--config", sim.config_path, "Simulation config JSON");
  std::uint64_t sim_seed = 0;
  CLI::Option* sim_seed_opt = simulate->add_option("--seed", sim_seed, "Root seed override");

  std::string train_config;
  std::optional<std::string> train_mode;
  std::optional<std::int64_t> train_max_steps;
  std::optional<std::string> train_out;
  std::optional<std::uint64_t> train_seed;
  CLI::App* train = app.add_subcommand("train", "Train a model");
  train->add_option("--config", train_config, "Experiment config JSON")->required();
  std::string mode_value;
  CLI::Option* mode_opt = train->add_option("--mode", mode_value, "pit or dat");
  std::int64_t max_steps_value = 0;
  CLI::Option* steps_opt = train->add_option("--max-steps", max_steps_value, "Step override");
  std::string out_value;
  CLI::Option* out_opt = train->add_option("--out", out_value, "Output dir override");
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt = train->add_option("--seed", seed_value, "Seed override");

  std::string dec_ckpt, dec_corpus, dec_out;
  int dec_max_symbols = 5;
  CLI::App* decode = app.add_subcommand("decode", "Greedy-decode a corpus");
  decode->add_option("--checkpoint", dec_ckpt, "Model checkpoint")->required();
  decode->add_option("--corpus", dec_corpus, "Corpus directory")->required();
  decode->add_option("--out", dec_out, "Hypothesis file")->required();
  decode->add_option("--max-symbols", dec_max_symbols, "Per-frame emission cap");

  std::string score_refs, score_hyps, score_out;
  CLI::App* score = app.add_subcommand("score", "Permutation-optimal WER");
  score->add_option("--refs", score_refs, "Reference corpus directory")->required();
  score->add_option("--hyps", score_hyps, "Hypothesis file")->required();
  score->add_option("--out", score_out, "Report file")->required();

  bool inject_bug = false;
  std::uint64_t check_seed = 7;
  CLI::App* selfcheck = app.add_subcommand("selfcheck", "Run numerical health checks");
  selfcheck->add_flag("--inject-lattice-bug", inject_bug,
                      "Negative control: corrupt the DP loss inside the oracle check");
  selfcheck->add_option("--seed", check_seed, "Check seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (simulate->parsed()) {
    if (sim_seed_opt->count() > 0) sim.seed_override = sim_seed;
    return run_simulate(sim);
  }
  if (train->parsed()) {
    if (mode_opt->count() > 0) train_mode = mode_value;
    if (steps_opt->count() > 0) train_max_steps = max_steps_value;
    if (out_opt->count() > 0) train_out = out_value;
    if (seed_opt->count() > 0) train_seed = seed_value;
    return run_train(train_config, train_mode, train_max_steps, train_out, train_seed);
  }
  if (decode->parsed()) return run_decode(dec_ckpt, dec_corpus, dec_out, dec_max_symbols);
  if (score->parsed()) return run_score(score_refs, score_hyps, score_out);
  if (selfcheck->parsed()) return run_selfcheck_cmd(inject_bug, check_seed);
  return kExitValidation;
}

}  // namespace
}  // namespace msrnnt

int main(int argc, char** argv) {
  try {
    return msrnnt::dispatch(argc, argv);
  } catch (const msrnnt::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return msrnnt::kExitNumeric;
  } catch (const msrnnt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return msrnnt::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return msrnnt::kExitValidation;
  }
}
