// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/app/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lipcascade/error.hpp"

namespace lipcascade::app {
namespace {

// Thrown by value parsers; rethrown as ConfigError with key and location.
struct BadValue {
  std::string expected;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw BadValue{"a non-negative integer"};
  }
  return out;
}

double to_double(const std::string& v) {
  double out = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw BadValue{"a number"};
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw BadValue{"a boolean (true/false)"};
}

std::string from_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string from_bool(bool b) { return b ? "true" : "false"; }

struct KeySpec {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Field>
KeySpec size_key(std::string name, Field field) {
  return {std::move(name),
          [field](RunConfig& c, const std::string& v) { field(c) = static_cast<std::size_t>(to_u64(v)); },
          [field](const RunConfig& c) { return std::to_string(field(c)); }};
}

template <typename Field>
KeySpec double_key(std::string name, Field field) {
  return {std::move(name), [field](RunConfig& c, const std::string& v) { field(c) = to_double(v); },
          [field](const RunConfig& c) { return from_double(field(c)); }};
}

template <typename Field>
KeySpec bool_key(std::string name, Field field) {
  return {std::move(name), [field](RunConfig& c, const std::string& v) { field(c) = to_bool(v); },
          [field](const RunConfig& c) { return from_bool(field(c)); }};
}

const std::vector<KeySpec>& registry() {
  static const std::vector<KeySpec> keys = [] {
    std::vector<KeySpec> k;
    k.push_back({"run.seed", [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    k.push_back(size_key("run.threads", [](auto& c) -> auto& { return c.threads; }));

    k.push_back(size_key("synth.n_chars", [](auto& c) -> auto& { return c.synth.n_chars; }));
    k.push_back(size_key("synth.n_visemes", [](auto& c) -> auto& { return c.synth.n_visemes; }));
    k.push_back(size_key("synth.frame_dim", [](auto& c) -> auto& { return c.synth.frame_dim; }));
    k.push_back(size_key("synth.frames_per_syllable",
                         [](auto& c) -> auto& { return c.synth.frames_per_syllable; }));
    k.push_back(double_key("synth.tone_amplitude",
                           [](auto& c) -> auto& { return c.synth.tone_channel_amplitude; }));
    k.push_back(double_key("synth.noise_sigma", [](auto& c) -> auto& { return c.synth.noise_sigma; }));
    k.push_back(double_key("synth.bigram_temperature",
                           [](auto& c) -> auto& { return c.synth.bigram_temperature; }));
    k.push_back({"synth.context",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "bigram") c.synth.context = synth::ContextModel::Bigram;
                   else if (v == "unigram") c.synth.context = synth::ContextModel::Unigram;
                   else throw BadValue{"bigram or unigram"};
                 },
                 [](const RunConfig& c) {
                   return std::string(c.synth.context == synth::ContextModel::Bigram ? "bigram" : "unigram");
                 }});
    k.push_back(size_key("synth.min_len", [](auto& c) -> auto& { return c.synth.min_length; }));
    k.push_back(size_key("synth.max_len", [](auto& c) -> auto& { return c.synth.max_length; }));
    k.push_back({"synth.render",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "vector") c.synth.render = synth::RenderMode::Vector;
                   else if (v == "image") c.synth.render = synth::RenderMode::Image;
                   else throw BadValue{"vector or image"};
                 },
                 [](const RunConfig& c) {
                   return std::string(c.synth.render == synth::RenderMode::Vector ? "vector" : "image");
                 }});
    k.push_back(size_key("synth.image_height", [](auto& c) -> auto& { return c.synth.image_height; }));
    k.push_back(size_key("synth.image_width", [](auto& c) -> auto& { return c.synth.image_width; }));
    k.push_back(bool_key("synth.allow_unambiguous",
                         [](auto& c) -> auto& { return c.synth.allow_unambiguous; }));
    k.push_back(size_key("synth.n_train", [](auto& c) -> auto& { return c.n_train; }));
    k.push_back(size_key("synth.n_val", [](auto& c) -> auto& { return c.n_val; }));
    k.push_back(size_key("synth.n_test", [](auto& c) -> auto& { return c.n_test; }));

    k.push_back({"model.mode",
                 [](RunConfig& c, const std::string& v) {
                   try {
                     c.mode = cascade::parse_model_kind(v);
                   } catch (const ConfigError&) {
                     throw BadValue{"full, no_video or baseline_was"};
                   }
                 },
                 [](const RunConfig& c) { return cascade::to_string(c.mode); }});
    k.push_back(size_key("model.feature_dim", [](auto& c) -> auto& { return c.model.feature_dim; }));
    k.push_back(size_key("model.enc_cell", [](auto& c) -> auto& { return c.model.encoder_cell; }));
    k.push_back(size_key("model.dec_cell", [](auto& c) -> auto& { return c.model.decoder_cell; }));
    k.push_back(size_key("model.enc_layers", [](auto& c) -> auto& { return c.model.encoder_layers; }));
    k.push_back(size_key("model.dec_layers", [](auto& c) -> auto& { return c.model.decoder_layers; }));
    k.push_back(size_key("model.attn_dim", [](auto& c) -> auto& { return c.model.attention_dim; }));
    k.push_back(size_key("model.head_dim", [](auto& c) -> auto& { return c.model.head_dim; }));
    k.push_back(size_key("model.embed_dim", [](auto& c) -> auto& { return c.model.embed_dim; }));
    k.push_back(size_key("model.conv_channels", [](auto& c) -> auto& { return c.model.conv_channels; }));

    k.push_back(double_key("train.lr", [](auto& c) -> auto& { return c.train.initial_lr; }));
    k.push_back(size_key("train.patience", [](auto& c) -> auto& { return c.train.patience; }));
    k.push_back(double_key("train.lr_factor", [](auto& c) -> auto& { return c.train.lr_factor; }));
    k.push_back(double_key("train.sampling_start", [](auto& c) -> auto& { return c.train.sampling_start; }));
    k.push_back(double_key("train.sampling_end", [](auto& c) -> auto& { return c.train.sampling_end; }));
    k.push_back(bool_key("train.sampling_inverse", [](auto& c) -> auto& { return c.train.sampling_inverse; }));
    k.push_back(size_key("train.batch_size", [](auto& c) -> auto& { return c.train.batch_size; }));
    k.push_back(size_key("train.max_epochs", [](auto& c) -> auto& { return c.train.max_epochs; }));
    k.push_back(bool_key("train.curriculum", [](auto& c) -> auto& { return c.train.curriculum; }));
    k.push_back(size_key("train.stage_epochs", [](auto& c) -> auto& { return c.train.stage_epochs; }));
    k.push_back(bool_key("train.joint", [](auto& c) -> auto& { return c.train.joint; }));
    k.push_back(size_key("train.pretrain_epochs", [](auto& c) -> auto& { return c.train.pretrain_epochs; }));
    k.push_back({"train.optimizer",
                 [](RunConfig& c, const std::string& v) {
                   try {
                     c.train.optimizer = training::parse_optimizer_kind(v);
                   } catch (const ConfigError&) {
                     throw BadValue{"adam or sgd"};
                   }
                 },
                 [](const RunConfig& c) { return training::to_string(c.train.optimizer); }});
    k.push_back(double_key("train.clip_norm", [](auto& c) -> auto& { return c.train.clip_norm; }));

    k.push_back(size_key("data.min_count", [](auto& c) -> auto& { return c.min_count; }));
    k.push_back(size_key("eval.max_len", [](auto& c) -> auto& { return c.eval_max_len; }));
    return k;
  }();
  return keys;
}

const KeySpec* find_key(const std::string& name) {
  for (const auto& k : registry()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

void apply(RunConfig& config, const std::string& key, const std::string& value,
           const std::string& where) {
  const KeySpec* spec = find_key(key);
  if (spec == nullptr) throw ConfigError(where + ": unknown key '" + key + "'");
  try {
    spec->set(config, value);
  } catch (const BadValue& bad) {
    throw ConfigError(where + ": key '" + key + "' expects " + bad.expected + ", got '" + value + "'");
  }
}

}  // namespace

void RunConfig::validate() const {
  synth.validate();
  model.validate();
  train_config(*this).validate();
  if (threads == 0) throw ConfigError("run.threads must be at least 1");
  if (n_train == 0 || n_val == 0 || n_test == 0) {
    throw ConfigError("synth.n_train, synth.n_val and synth.n_test must be at least 1");
  }
  if (eval_max_len == 0) throw ConfigError("eval.max_len must be at least 1");
}

RunConfig parse_config_text(const std::string& text, const Overrides& overrides,
                            const std::string& origin) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    apply(config, trim(std::string_view(body).substr(0, eq)),
          trim(std::string_view(body).substr(eq + 1)), where);
  }
  for (const auto& [key, value] : overrides) {
    apply(config, key, value, "--" + key);
  }
  config.validate();
  return config;
}

RunConfig parse_config(const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), overrides, path.string());
}

std::string echo_config(const RunConfig& config) {
  std::string out;
  for (const auto& k : registry()) {
    out += k.name;
    out += " = ";
    out += k.get(config);
    out += '\n';
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : registry()) out.push_back(k.name);
  return out;
}

cascade::ModelConfig model_config(const RunConfig& config) {
  cascade::ModelConfig m = config.model;
  m.front_end = config.synth.render == synth::RenderMode::Image ? layers::FrontEnd::Image
                                                                : layers::FrontEnd::Vector;
  m.frame_dim = config.synth.frame_dim;
  m.image_height = config.synth.image_height;
  m.image_width = config.synth.image_width;
  return m;
}

training::TrainConfig train_config(const RunConfig& config) {
  training::TrainConfig t = config.train;
  t.seed = config.seed;
  t.eval_threads = config.threads;
  t.eval_max_len = config.eval_max_len;
  return t;
}

}  // namespace lipcascade::app
