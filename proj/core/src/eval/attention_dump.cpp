// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/eval/attention_dump.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "lipcascade/error.hpp"
#include "lipcascade/layers/frame_features.hpp"

namespace lipcascade::eval {
namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<std::string> step_labels(const text::Vocab& vocab, std::span<const num::TokenId> ids,
                                     std::size_t rows) {
  std::vector<std::string> labels;
  for (auto id : ids) labels.push_back(vocab.token(id));
  while (labels.size() < rows) labels.emplace_back(text::kEos);
  labels.resize(rows);
  return labels;
}

std::string file_stem(const std::string& name) {
  std::string out = name;
  const auto arrow = out.find("->");
  if (arrow != std::string::npos) out.replace(arrow, 2, "_to_");
  return out;
}

}  // namespace

void write_attention_matrix(const std::filesystem::path& path, const num::Tensor& weights) {
  auto out = open_out(path);
  const std::size_t rows = weights.dim(0);
  const std::size_t cols = weights.dim(1);
  char buf[64];
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (j) out << ',';
      auto res = std::to_chars(buf, buf + sizeof buf, weights.at(i, j));
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::vector<double>> read_attention_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      double v = 0.0;
      auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad number");
      }
      row.push_back(v);
      p = res.ptr;
      if (p < end && *p == ',') ++p;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_attention_image(const std::filesystem::path& path, const num::Tensor& weights,
                           std::size_t pixels_per_cell) {
  const std::size_t rows = weights.dim(0);
  const std::size_t cols = weights.dim(1);
  const std::size_t k = std::max<std::size_t>(1, pixels_per_cell);
  auto out = open_out(path, true);
  out << "P5\n" << cols * k << ' ' << rows * k << "\n255\n";
  std::vector<unsigned char> line(cols * k);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double w = std::clamp(weights.at(i, j), 0.0, 1.0);
      std::fill_n(line.begin() + static_cast<std::ptrdiff_t>(j * k), k,
                  static_cast<unsigned char>(std::lround(w * 255.0)));
    }
    for (std::size_t r = 0; r < k; ++r) {
      out.write(reinterpret_cast<const char*>(line.data()), static_cast<std::streamsize>(line.size()));
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<DumpedAttention> dump_attention(const cascade::LipReader& model,
                                            const VideoFrames& frames,
                                            const text::Vocabularies& vocabs,
                                            std::size_t max_len,
                                            const std::filesystem::path& out_dir,
                                            const AttentionDumpOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const cascade::Decoded decoded = model.decode(frames, max_len);

  // Row labels per decoder, keyed by decoder name; encoders reuse the labels
  // of the decoder whose outputs they consume.
  std::map<std::string, std::vector<std::string>> stage_labels;
  for (const auto& map : decoded.attention) {
    const std::string dec = map.name.substr(map.name.find("->") + 2);
    if (stage_labels.count(dec)) continue;
    const std::size_t rows = map.weights.dim(0);
    if (dec == "pinyin") stage_labels[dec] = step_labels(vocabs.pinyin, decoded.pinyin, rows);
    if (dec == "tone") stage_labels[dec] = step_labels(vocabs.tone, decoded.tone, rows);
    if (dec == "char") stage_labels[dec] = step_labels(vocabs.character, decoded.chars, rows);
  }

  std::vector<DumpedAttention> written;
  for (const auto& map : decoded.attention) {
    const std::string enc = map.name.substr(0, map.name.find("->"));
    const std::string dec = map.name.substr(map.name.find("->") + 2);
    std::vector<std::string> cols;
    if (enc == "video") {
      for (std::size_t j = 0; j < map.weights.dim(1); ++j) {
        const std::size_t first = j * layers::kFrameStride;
        cols.push_back("f" + std::to_string(first) + "-" +
                       std::to_string(first + layers::kFrameWindow - 1));
      }
    } else {
      cols = stage_labels.at(enc);
    }

    DumpedAttention d;
    d.name = map.name;
    const std::string stem = file_stem(map.name);
    d.matrix = out_dir / (stem + ".csv");
    d.labels = out_dir / (stem + ".labels.tsv");
    write_attention_matrix(d.matrix, map.weights);
    {
      auto out = open_out(d.labels);
      out << "name\t" << map.name << '\n' << "rows";
      for (const auto& r : stage_labels.at(dec)) out << '\t' << r;
      out << '\n' << "cols";
      for (const auto& c : cols) out << '\t' << c;
      out << '\n';
      if (!out) throw IoError("failed writing " + d.labels.string());
    }
    if (options.write_image) {
      d.image = out_dir / (stem + ".pgm");
      write_attention_image(d.image, map.weights, options.pixels_per_cell);
    }
    written.push_back(std::move(d));
  }
  return written;
}

}  // namespace lipcascade::eval
