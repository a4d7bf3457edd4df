// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/eval/evaluate.hpp"

#include <charconv>
#include <functional>
#include <thread>

#include "lipcascade/error.hpp"

namespace lipcascade::eval {
namespace {

using num::TokenId;

// Runs fn(i) for i in [0, n) on up to `threads` threads; each index is
// handled exactly once and results are written by index.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<TokenId> strip_specials(std::span<const TokenId> ids) {
  std::vector<TokenId> out;
  for (TokenId id : ids) {
    if (id == 1) break;  // [eos]
    if (id == 0 || id == 2) continue;
    out.push_back(id);
  }
  return out;
}

std::map<std::string, double> EvalReport::values() const {
  std::map<std::string, double> out{{"overall.cer", overall_cer}};
  if (has_subnetworks) {
    out["overall.per"] = overall_per;
    out["overall.ter"] = overall_ter;
    out["v2p.per"] = v2p_per;
    out["vp2t.ter"] = vp2t_ter;
    out["vpt2c.cer"] = vpt2c_cer;
  }
  return out;
}

std::string EvalReport::to_text() const {
  std::string out;
  const char* order[] = {"overall.cer", "overall.per", "overall.ter",
                         "v2p.per",     "vp2t.ter",    "vpt2c.cer"};
  const auto v = values();
  for (const char* key : order) {
    auto it = v.find(key);
    if (it == v.end()) continue;
    out += key;
    out += '=';
    out += format_double(it->second);
    out += '\n';
  }
  out += "samples=" + std::to_string(samples) + "\n";
  return out;
}

std::vector<SampleScores> score_overall(const cascade::LipReader& model,
                                        std::span<const cascade::Sample> data,
                                        std::size_t max_len, std::size_t threads) {
  std::vector<SampleScores> scores(data.size());
  parallel_for(data.size(), threads, [&](std::size_t i) {
    const cascade::Sample& s = data[i];
    const cascade::Decoded d = model.decode(s.frames, max_len);
    scores[i].cer = edit_distance(strip_specials(s.targets.chars), d.chars);
    if (model.predicts_pinyin()) {
      scores[i].per = edit_distance(strip_specials(s.targets.pinyin), d.pinyin);
      scores[i].ter = edit_distance(strip_specials(s.targets.tone), d.tone);
    }
  });
  return scores;
}

EvalReport evaluate(const cascade::LipReader& model, std::span<const cascade::Sample> data,
                    const EvalOptions& options) {
  if (data.empty()) throw UndefinedRateError("empty evaluation set");
  EvalReport report;
  report.samples = data.size();
  const auto overall = score_overall(model, data, options.max_len, options.threads);
  RateAccumulator cer, per, ter;
  for (const auto& s : overall) {
    cer.add(s.cer);
    per.add(s.per);
    ter.add(s.ter);
  }
  report.overall_cer = cer.rate();

  const auto* cascade_model = dynamic_cast<const cascade::CascadeModel*>(&model);
  if (cascade_model == nullptr) return report;
  report.has_subnetworks = true;
  report.overall_per = per.rate();
  report.overall_ter = ter.rate();
  std::vector<EditOps> vp2t(data.size());
  std::vector<EditOps> vpt2c(data.size());
  parallel_for(data.size(), options.threads, [&](std::size_t i) {
    const auto& t = data[i].targets;
    const auto tone = cascade_model->decode_tone_given_pinyin(data[i].frames, t.pinyin,
                                                              options.joint, options.max_len);
    vp2t[i] = edit_distance(strip_specials(t.tone), tone);
    const auto chars = cascade_model->decode_chars_given_pinyin_tone(
        data[i].frames, t.pinyin, t.tone, options.joint, options.max_len);
    vpt2c[i] = edit_distance(strip_specials(t.chars), chars);
  });
  // The pinyin stage has no upstream, so its row equals the overall PER.
  report.v2p_per = report.overall_per;
  report.vp2t_ter = error_rate(vp2t);
  report.vpt2c_cer = error_rate(vpt2c);
  return report;
}

}  // namespace lipcascade::eval
