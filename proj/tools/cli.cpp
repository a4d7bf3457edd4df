// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lipcascade/app/grad_suite.hpp"
#include "lipcascade/app/pipeline.hpp"
#include "lipcascade/app/run_config.hpp"
#include "lipcascade/error.hpp"
#include "lipcascade/eval/attention_dump.hpp"
#include "lipcascade/eval/evaluate.hpp"
#include "lipcascade/synthdata/synth.hpp"
#include "lipcascade/training/checkpoint.hpp"
#include "lipcascade/training/trainer.hpp"

namespace lipcascade::cli {
namespace {

namespace fs = std::filesystem;

struct CommonArgs {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t threads = 0;
};

app::Overrides collect_overrides(const std::vector<std::string>& extras,
                                 const CommonArgs& common) {
  app::Overrides out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& a = extras[i];
    if (a.rfind("--", 0) != 0 || a.find('.') == std::string::npos) {
      throw ConfigError("unexpected argument '" + a + "'");
    }
    std::string key = a.substr(2);
    std::string value;
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.resize(eq);
    } else {
      if (i + 1 >= extras.size()) throw ConfigError("missing value for --" + key);
      value = extras[++i];
    }
    out.emplace_back(key, value);
  }
  if (common.seed_set) out.emplace_back("run.seed", std::to_string(common.seed));
  if (common.threads > 0) out.emplace_back("run.threads", std::to_string(common.threads));
  return out;
}

app::RunConfig load_config(const CommonArgs& common, const std::vector<std::string>& extras) {
  const auto overrides = collect_overrides(extras, common);
  if (common.config.empty()) return app::parse_config_text("", overrides, "<defaults>");
  return app::parse_config(common.config, overrides);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void check_frame_dims(std::span<const synth::SynthSample> data, const app::RunConfig& cfg,
                      const std::string& what) {
  const std::size_t expected = cfg.synth.rendered_dim();
  for (const auto& s : data) {
    if (s.frames.dim != expected) {
      throw FormatError(what + " frames have dimension " + std::to_string(s.frames.dim) +
                        ", configuration expects " + std::to_string(expected));
    }
  }
}

struct LoadedRun {
  app::RunConfig config;
  text::Vocabularies vocabs;
  std::unique_ptr<cascade::LipReader> model;
};

LoadedRun load_run(const fs::path& checkpoint_path) {
  const training::Checkpoint ckpt = training::read_checkpoint(checkpoint_path);
  LoadedRun run;
  run.config = app::parse_config_text(ckpt.config_echo, {}, checkpoint_path.string() + "#config");
  run.vocabs = app::load_vocabularies(checkpoint_path.parent_path());
  run.model = app::build_model(run.config, app::vocab_sizes(run.vocabs));
  training::load_parameters(ckpt, run.model->parameters());
  return run;
}

std::vector<synth::SynthSample> load_split(const fs::path& data_dir, const std::string& split) {
  return synth::load_manifest(data_dir / (split + ".tsv"));
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

// ---- subcommands ----------------------------------------------------------

int cmd_synth_gen(const CommonArgs& common, const std::vector<std::string>& extras,
                  const std::string& out_dir, std::ostream& out) {
  const app::RunConfig cfg = load_config(common, extras);
  ensure_dir(out_dir);
  synth::generate_dataset(cfg.synth, cfg.n_train, cfg.n_val, cfg.n_test, cfg.seed, out_dir);
  write_text(fs::path(out_dir) / "config.txt", app::echo_config(cfg));
  for (const char* split : {"train", "val", "test"}) {
    out << split << '=' << (fs::path(out_dir) / (std::string(split) + ".tsv")).string() << '\n';
  }
  return kOk;
}

int cmd_train(const CommonArgs& common, const std::vector<std::string>& extras,
              const std::string& data_dir, const std::string& out_dir, bool quiet,
              std::ostream& out, std::ostream& err) {
  const app::RunConfig cfg = load_config(common, extras);
  std::vector<synth::SynthSample> train_raw, val_raw;
  if (!data_dir.empty()) {
    train_raw = load_split(data_dir, "train");
    val_raw = load_split(data_dir, "val");
  } else {
    synth::SynthCorpus corpus =
        synth::generate_corpus(cfg.synth, cfg.n_train, cfg.n_val, 1, cfg.seed);
    train_raw = std::move(corpus.train);
    val_raw = std::move(corpus.val);
  }
  check_frame_dims(train_raw, cfg, "training");
  check_frame_dims(val_raw, cfg, "validation");

  ensure_dir(out_dir);
  const fs::path dir(out_dir);
  const text::Vocabularies vocabs = app::build_vocabularies(train_raw, cfg.min_count);
  app::save_vocabularies(vocabs, dir);
  const app::EncodedSet train_set = app::encode_samples(train_raw, vocabs);
  const app::EncodedSet val_set = app::encode_samples(val_raw, vocabs);
  if (train_set.dropped || val_set.dropped) {
    err << "note: dropped " << train_set.dropped << " training and " << val_set.dropped
        << " validation sentences with tokens below data.min_count\n";
  }
  const std::string echo = app::echo_config(cfg);
  write_text(dir / "config.txt", echo);

  const auto model = app::build_model(cfg, app::vocab_sizes(vocabs));
  const num::ParamList params = model->parameters();
  training::TrainHistory partial;
  training::TrainCallbacks callbacks;
  callbacks.on_epoch = [&](const training::EpochRecord& rec,
                           const training::OptimizerState& state, bool is_best) {
    partial.epochs.push_back(rec);
    write_text(dir / "history.tsv", partial.to_tsv());
    const training::Checkpoint ckpt = training::make_checkpoint(params, &state, echo);
    training::write_checkpoint(dir / "last.ckpt", ckpt);
    if (is_best) training::write_checkpoint(dir / "best.ckpt", ckpt);
    if (!quiet) {
      err << "epoch " << rec.epoch << " loss " << rec.loss << " (p " << rec.loss_pinyin
          << " t " << rec.loss_tone << " c " << rec.loss_char << ") val_cer " << rec.val_cer
          << " lr " << rec.lr << " rate " << rec.sampling_rate << " stage " << rec.stage
          << (is_best ? " *" : "") << '\n';
    }
  };
  const training::TrainHistory history =
      training::train(*model, train_set.samples, val_set.samples, app::vocab_sizes(vocabs),
                      app::train_config(cfg), callbacks);
  out << "epochs=" << history.epochs.size() << '\n'
      << "best_epoch=" << history.best_epoch << '\n'
      << "best_val_cer=" << history.best_val_cer << '\n'
      << "history=" << (dir / "history.tsv").string() << '\n'
      << "best_checkpoint=" << (dir / "best.ckpt").string() << '\n';
  return kOk;
}

int cmd_eval(const std::string& checkpoint, const std::string& data_dir,
             const std::string& split, const std::string& report_path, std::size_t threads,
             std::ostream& out, std::ostream& err) {
  LoadedRun run = load_run(checkpoint);
  const auto raw = load_split(data_dir, split);
  check_frame_dims(raw, run.config, split);
  const app::EncodedSet data = app::encode_samples(raw, run.vocabs);
  if (data.dropped) err << "note: skipped " << data.dropped << " out-of-vocabulary sentences\n";
  eval::EvalOptions options;
  options.max_len = run.config.eval_max_len;
  options.joint = run.config.train.joint;
  options.threads = threads > 0 ? threads : run.config.threads;
  const eval::EvalReport report = eval::evaluate(*run.model, data.samples, options);
  const std::string text = report.to_text();
  if (!report_path.empty()) write_text(report_path, text);
  out << text;
  return kOk;
}

int cmd_decode(const std::string& checkpoint, const std::string& data_dir,
               const std::string& split, std::size_t limit, std::ostream& out) {
  LoadedRun run = load_run(checkpoint);
  const auto raw = load_split(data_dir, split);
  check_frame_dims(raw, run.config, split);
  const std::size_t n = limit > 0 ? std::min(limit, raw.size()) : raw.size();
  out << "index\treference\tchars\tpinyin\ttones\n";
  for (std::size_t i = 0; i < n; ++i) {
    const cascade::Decoded d = run.model->decode(raw[i].frames, run.config.eval_max_len);
    out << i << '\t' << join_tokens(raw[i].annotation.chars) << '\t'
        << join_tokens(run.vocabs.character.decode(d.chars)) << '\t'
        << join_tokens(run.vocabs.pinyin.decode(d.pinyin)) << '\t'
        << join_tokens(run.vocabs.tone.decode(d.tone)) << '\n';
  }
  return kOk;
}

int cmd_dump_attention(const std::string& checkpoint, const std::string& data_dir,
                       const std::string& split, std::size_t index, const std::string& out_dir,
                       bool no_image, std::ostream& out) {
  LoadedRun run = load_run(checkpoint);
  const auto raw = load_split(data_dir, split);
  check_frame_dims(raw, run.config, split);
  if (index >= raw.size()) {
    throw IndexError("sample index " + std::to_string(index) + " out of range (" +
                     std::to_string(raw.size()) + " samples in " + split + ")");
  }
  eval::AttentionDumpOptions options;
  options.write_image = !no_image;
  const auto written = eval::dump_attention(*run.model, raw[index].frames, run.vocabs,
                                            run.config.eval_max_len, out_dir, options);
  for (const auto& w : written) {
    out << w.name << '\t' << w.matrix.string() << '\t' << w.labels.string();
    if (!w.image.empty()) out << '\t' << w.image.string();
    out << '\n';
  }
  return kOk;
}

int cmd_grad_check(const CommonArgs& common, const std::vector<std::string>& extras,
                   double tol, double eps, double param_scale, bool verbose,
                   std::ostream& out) {
  const app::RunConfig cfg = load_config(common, extras);
  app::GradSuiteOptions options;
  options.check.tol = tol;
  options.check.eps = eps;
  options.check.seed = cfg.seed;
  options.param_scale = param_scale;
  const auto entries = app::run_grad_suite(app::model_config(cfg), cfg.seed, options);
  bool all = true;
  out << "check\tmax_rel_error\tmax_abs_error\tfailed\tchecked\tpass\n";
  for (const auto& e : entries) {
    all = all && e.report.pass;
    out << e.name << '\t' << e.report.max_rel_error << '\t' << e.report.max_abs_error
        << '\t' << e.report.coords_failed << '\t' << e.report.coords_checked << '\t'
        << (e.report.pass ? "true" : "false") << '\n';
    if (!verbose) continue;
    for (const auto& p : e.report.params) {
      out << "  " << e.name << '/' << p.name << '\t' << p.max_rel_error << '\t'
          << p.max_abs_error << '\t' << p.coords_failed << '\t' << p.coords_checked
          << '\n';
    }
  }
  out << "pass=" << (all ? "true" : "false") << '\n';
  return all ? kOk : kNumeric;
}

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Usage: return kUsage;
    case ErrorCategory::Data: return kData;
    case ErrorCategory::Numeric: return kNumeric;
  }
  return kData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cascaded pinyin/tone/character lip-reading laboratory", "lipcascade"};
  app.require_subcommand(1);

  CommonArgs common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Config file (key = value lines)");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t s) { common.seed = s; common.seed_set = true; },
        "Root seed (overrides run.seed)");
    sub->add_option("--threads", common.threads, "Worker threads (overrides run.threads)");
    sub->allow_extras();
    sub->footer("Any config key can be overridden as --section.key value.");
  };

  std::string out_dir, data_dir, checkpoint, split = "test", report_path;
  std::size_t limit = 0, index = 0, eval_threads = 0;
  bool quiet = false, no_image = false, verbose = false;
  double tol = 1e-4, eps = 1e-5, param_scale = 0.5;

  auto* synth_gen = app.add_subcommand("synth-gen", "Generate a synthetic corpus");
  add_common(synth_gen);
  synth_gen->add_option("--out", out_dir, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Train a model");
  add_common(train);
  train->add_option("--data", data_dir, "Corpus directory from synth-gen (default: generate in memory)");
  train->add_option("--out", out_dir, "Run directory")->required();
  train->add_flag("--quiet", quiet, "No per-epoch progress on stderr");

  auto* evaluate = app.add_subcommand("eval", "Report CER/PER/TER of a checkpoint");
  evaluate->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  evaluate->add_option("--data", data_dir, "Corpus directory")->required();
  evaluate->add_option("--split", split, "train, val or test")->capture_default_str();
  evaluate->add_option("--report", report_path, "Also write the report to this file");
  evaluate->add_option("--threads", eval_threads, "Decoding threads");

  auto* decode = app.add_subcommand("decode", "Greedy-decode sentences of a split");
  decode->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  decode->add_option("--data", data_dir, "Corpus directory")->required();
  decode->add_option("--split", split, "train, val or test")->capture_default_str();
  decode->add_option("--limit", limit, "Decode at most this many sentences (0 = all)");

  auto* dump = app.add_subcommand("dump-attention", "Export attention maps for one sentence");
  dump->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  dump->add_option("--data", data_dir, "Corpus directory")->required();
  dump->add_option("--split", split, "train, val or test")->capture_default_str();
  dump->add_option("--index", index, "Sentence index within the split")->capture_default_str();
  dump->add_option("--out", out_dir, "Output directory")->required();
  dump->add_flag("--no-image", no_image, "Skip the PGM images");

  auto* grad = app.add_subcommand("grad-check", "Finite-difference check of all gradients");
  add_common(grad);
  grad->add_option("--tol", tol, "Relative error tolerance")->capture_default_str();
  grad->add_option("--eps", eps, "Central difference step")->capture_default_str();
  grad->add_option("--param-scale", param_scale,
                   "Redraw whole-model parameters from U(-s, s); 0 keeps the initialization")
      ->capture_default_str();
  grad->add_flag("--verbose", verbose, "Per-parameter errors");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kUsage;
  }

  try {
    if (*synth_gen) return cmd_synth_gen(common, synth_gen->remaining(), out_dir, out);
    if (*train) {
      return cmd_train(common, train->remaining(), data_dir, out_dir, quiet, out, err);
    }
    if (*evaluate) {
      return cmd_eval(checkpoint, data_dir, split, report_path, eval_threads, out, err);
    }
    if (*decode) return cmd_decode(checkpoint, data_dir, split, limit, out);
    if (*dump) return cmd_dump_attention(checkpoint, data_dir, split, index, out_dir, no_image, out);
    if (*grad) return cmd_grad_check(common, grad->remaining(), tol, eps, param_scale, verbose, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  err << app.help();
  return kUsage;
}

}  // namespace lipcascade::cli
