// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>

#include "lipcascade/error.hpp"
#include "lipcascade/synthdata/frame_io.hpp"
#include "lipcascade/synthdata/synth.hpp"

namespace lipcascade::synth {
namespace {

std::vector<SynthSample> generate_split(const SynthSpec& spec, const Lexicon& lexicon,
                                        const BigramTable& bigram, std::size_t count,
                                        std::uint64_t seed, const std::string& split) {
  std::vector<SynthSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng sentence_rng(seed, "synth/" + split + "/sentence", i);
    Rng render_rng(seed, "synth/" + split + "/render", i);
    SynthSample s;
    s.annotation =
        sample_sentence(lexicon, bigram, spec.min_length, spec.max_length, sentence_rng);
    s.frames = render_frames(s.annotation, lexicon, spec, render_rng);
    out.push_back(std::move(s));
  }
  return out;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace

SynthCorpus generate_corpus(const SynthSpec& spec, std::size_t n_train, std::size_t n_val,
                            std::size_t n_test, std::uint64_t seed) {
  if (n_train < 1 || n_val < 1 || n_test < 1) {
    throw SpecError("every split needs at least one sample");
  }
  SynthCorpus corpus;
  corpus.lexicon = make_lexicon(spec, seed);
  corpus.bigram = make_bigram_table(spec, seed);
  corpus.train = generate_split(spec, corpus.lexicon, corpus.bigram, n_train, seed, "train");
  corpus.val = generate_split(spec, corpus.lexicon, corpus.bigram, n_val, seed, "val");
  corpus.test = generate_split(spec, corpus.lexicon, corpus.bigram, n_test, seed, "test");
  return corpus;
}

void write_manifest(const std::filesystem::path& manifest,
                    std::span<const SynthSample> samples, const std::string& stem) {
  const auto dir = manifest.parent_path();
  std::filesystem::create_directories(dir / "frames");
  std::ofstream out(manifest, std::ios::binary);
  if (!out) throw IoError("cannot write manifest " + manifest.string());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "frames/%s_%05zu.frm", stem.c_str(), i);
    write_frames(dir / name, samples[i].frames);
    const auto& a = samples[i].annotation;
    out << name << '\t' << join(a.chars) << '\t' << join(a.pinyin_tokens()) << '\t'
        << join(a.tone_tokens()) << '\n';
  }
  if (!out) throw IoError("failed writing manifest " + manifest.string());
}

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  write_manifest(out_dir / "train.tsv", corpus.train, "train");
  write_manifest(out_dir / "val.tsv", corpus.val, "val");
  write_manifest(out_dir / "test.tsv", corpus.test, "test");
  std::ofstream lex(out_dir / "lexicon.tsv", std::ios::binary);
  if (!lex) throw IoError("cannot write " + (out_dir / "lexicon.tsv").string());
  for (const auto& e : corpus.lexicon.entries) {
    lex << e.character << '\t' << e.viseme << '\t' << e.syllable.str() << '\t'
        << e.tone.value() << '\n';
  }
}

SynthCorpus generate_dataset(const SynthSpec& spec, std::size_t n_train, std::size_t n_val,
                             std::size_t n_test, std::uint64_t seed,
                             const std::filesystem::path& out_dir) {
  SynthCorpus corpus = generate_corpus(spec, n_train, n_val, n_test, seed);
  write_corpus(corpus, out_dir);
  return corpus;
}

std::vector<SynthSample> load_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest, std::ios::binary);
  if (!in) throw IoError("cannot read manifest " + manifest.string());
  std::vector<SynthSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(manifest.string() + ":" + std::to_string(line_no) +
                       ": missing frames path field");
    }
    SynthSample s;
    try {
      s.annotation = text::parse_corpus_line(std::string_view(line).substr(tab + 1));
    } catch (const Error& e) {
      throw ParseError(manifest.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    std::filesystem::path frames_path = line.substr(0, tab);
    if (frames_path.is_relative()) frames_path = manifest.parent_path() / frames_path;
    s.frames = read_frames(frames_path);
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace lipcascade::synth
