// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/textproc/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "lipcascade/error.hpp"

namespace lipcascade::text {

Vocab::Vocab() {
  add(kSos);
  add(kEos);
  add(kPad);
}

Vocab::Vocab(const std::vector<std::string>& tokens, std::size_t min_count) : Vocab() {
  min_count_ = min_count;
  for (const auto& t : tokens) {
    if (!contains(t)) add(t);
  }
}

void Vocab::add(const std::string& token) {
  ids_.emplace(token, static_cast<TokenId>(tokens_.size()));
  tokens_.push_back(token);
}

TokenId Vocab::id(const std::string& token) const {
  const auto it = ids_.find(token);
  if (it == ids_.end()) throw VocabError("unknown token '" + token + "'");
  return it->second;
}

const std::string& Vocab::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw IndexError("token id " + std::to_string(id) + " outside vocabulary of " +
                     std::to_string(tokens_.size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<TokenId> Vocab::encode(std::span<const std::string> tokens) const {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size() + 1);
  for (const auto& t : tokens) ids.push_back(id(t));
  ids.push_back(eos());
  return ids;
}

std::vector<std::string> Vocab::decode(std::span<const TokenId> ids) const {
  std::vector<std::string> out;
  for (TokenId i : ids) {
    if (!is_special(i)) out.push_back(token(i));
  }
  return out;
}

void Vocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write vocabulary " + path.string());
  for (const auto& t : tokens_) out << t << '\n';
  if (!out) throw IoError("failed writing vocabulary " + path.string());
}

Vocab Vocab::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read vocabulary " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) tokens.push_back(line);
  }
  if (tokens.size() < 3 || tokens[0] != kSos || tokens[1] != kEos || tokens[2] != kPad) {
    throw FormatError("vocabulary " + path.string() + " must start with the specials");
  }
  return Vocab(tokens);
}

Vocab build_vocab(std::span<const std::vector<std::string>> corpus, std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (const auto& sentence : corpus) {
    for (const auto& t : sentence) ++counts[t];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (const auto& [token, count] : counts) {
    if (count > min_count) kept.emplace_back(token, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [token, count] : kept) tokens.push_back(token);
  return Vocab(tokens, min_count);
}

}  // namespace lipcascade::text
