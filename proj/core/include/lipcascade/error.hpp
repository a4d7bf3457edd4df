// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace lipcascade {

/// Broad failure class; the CLI maps each to a stable exit code.
enum class ErrorCategory { Usage, Data, Numeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define LIPCASCADE_DEFINE_ERROR(Name, Category, Prefix)                    \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what)                                  \
        : Error(ErrorCategory::Category, std::string(Prefix) + what) {}     \
  };

LIPCASCADE_DEFINE_ERROR(ShapeError, Numeric, "shape error: ")
LIPCASCADE_DEFINE_ERROR(IndexError, Data, "index error: ")
LIPCASCADE_DEFINE_ERROR(NumericError, Numeric, "numeric error: ")
LIPCASCADE_DEFINE_ERROR(LengthError, Data, "length error: ")
LIPCASCADE_DEFINE_ERROR(AlignmentError, Data, "alignment error: ")
LIPCASCADE_DEFINE_ERROR(ParseError, Data, "parse error: ")
LIPCASCADE_DEFINE_ERROR(VocabError, Data, "vocabulary error: ")
LIPCASCADE_DEFINE_ERROR(SpecError, Usage, "spec error: ")
LIPCASCADE_DEFINE_ERROR(ConfigError, Usage, "config error: ")
LIPCASCADE_DEFINE_ERROR(FormatError, Data, "format error: ")
LIPCASCADE_DEFINE_ERROR(IoError, Data, "I/O error: ")
LIPCASCADE_DEFINE_ERROR(UndefinedRateError, Data, "undefined rate: ")

#undef LIPCASCADE_DEFINE_ERROR

}  // namespace lipcascade
