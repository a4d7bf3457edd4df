// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lipcascade/numerics/ops.hpp"

namespace lipcascade::text {

using num::TokenId;

inline constexpr const char* kSos = "[sos]";
inline constexpr const char* kEos = "[eos]";
inline constexpr const char* kPad = "[pad]";

/// Dense id <-> token bijection with [sos], [eos], [pad] at ids 0, 1, 2.
class Vocab {
 public:
  Vocab();
  /// Specials are added if absent from `tokens`; order is otherwise kept.
  explicit Vocab(const std::vector<std::string>& tokens, std::size_t min_count = 0);

  std::size_t size() const { return tokens_.size(); }
  TokenId sos() const { return 0; }
  TokenId eos() const { return 1; }
  TokenId pad() const { return 2; }
  std::size_t min_count() const { return min_count_; }
  bool is_special(TokenId id) const { return id >= 0 && id <= 2; }

  bool contains(const std::string& token) const { return ids_.count(token) != 0; }
  TokenId id(const std::string& token) const;
  const std::string& token(TokenId id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// Appends [eos]. Unknown tokens are an error.
  std::vector<TokenId> encode(std::span<const std::string> tokens) const;
  /// Drops special ids.
  std::vector<std::string> decode(std::span<const TokenId> ids) const;

  void save(const std::filesystem::path& path) const;
  static Vocab load(const std::filesystem::path& path);

  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

 private:
  void add(const std::string& token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
  std::size_t min_count_ = 0;
};

/// Keeps tokens seen more than `min_count` times, ordered by count descending
/// then token ascending, after the three specials.
Vocab build_vocab(std::span<const std::vector<std::string>> corpus, std::size_t min_count);

}  // namespace lipcascade::text
