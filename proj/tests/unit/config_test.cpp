// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>

#include "lipcascade/app/run_config.hpp"
#include "lipcascade/error.hpp"

namespace lipcascade::app {
namespace {

namespace fs = std::filesystem;

std::string error_of(const std::string& text, const Overrides& overrides = {}) {
  try {
    parse_config_text(text, overrides, "t.conf");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, DefaultsMatchDocumentedDimensions) {
  const RunConfig c = parse_config_text("");
  EXPECT_EQ(c.model.feature_dim, 512u);
  EXPECT_EQ(c.model.encoder_cell, 256u);
  EXPECT_EQ(c.model.decoder_cell, 512u);
  EXPECT_EQ(c.model.encoder_layers, 2u);
  EXPECT_EQ(c.train.batch_size, 8u);
  EXPECT_EQ(c.min_count, 20u);
}

TEST(Config, EchoRoundTrips) {
  const RunConfig c = parse_config_text(
      "run.seed = 9\nsynth.n_chars = 16\nmodel.mode = no_video\ntrain.lr = 0.0025\n"
      "train.curriculum = false\n");
  const std::string echo = echo_config(c);
  EXPECT_EQ(echo_config(parse_config_text(echo)), echo);
  for (const auto& key : config_keys()) {
    EXPECT_NE(echo.find(key + " = "), std::string::npos) << key;
  }
}

TEST(Config, OverridesWinOverFile) {
  const RunConfig c = parse_config_text("train.max_epochs = 3  # comment\n",
                                        {{"train.max_epochs", "7"}});
  EXPECT_EQ(c.train.max_epochs, 7u);
}

TEST(Config, UnknownKeyNamesKeyAndLine) {
  const std::string what = error_of("run.seed = 1\nmodel.depth = 3\n");
  EXPECT_NE(what.find("t.conf:2"), std::string::npos) << what;
  EXPECT_NE(what.find("model.depth"), std::string::npos) << what;
}

TEST(Config, BadValues) {
  EXPECT_NE(error_of("train.lr = fast\n").find("expects a number"), std::string::npos);
  EXPECT_NE(error_of("train.batch_size = -1\n").find("non-negative integer"), std::string::npos);
  EXPECT_NE(error_of("train.curriculum = maybe\n").find("boolean"), std::string::npos);
  EXPECT_NE(error_of("model.mode = lipnet\n").find("baseline_was"), std::string::npos);
  EXPECT_NE(error_of("no equals sign\n").find("key = value"), std::string::npos);
  EXPECT_NE(error_of("", {{"bogus", "1"}}).find("--bogus"), std::string::npos);
  EXPECT_FALSE(error_of("train.batch_size = 0\n").empty());
  EXPECT_THROW(parse_config("/nonexistent/x.conf"), ConfigError);
}

TEST(Config, ShippedConfigsAreValid) {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(LIPCASCADE_CONFIG_DIR)) {
    if (entry.path().extension() != ".conf") continue;
    EXPECT_NO_THROW(parse_config(entry.path())) << entry.path();
    ++n;
  }
  EXPECT_GE(n, 5u);
}

}  // namespace
}  // namespace lipcascade::app
