#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bootlex {

enum class ErrorCode {
  EmptyCorpus,
  LayerMissing,
  GrammarSyntaxError,
  DuplicateRuleName,
  ResourceSyntaxError,
  ConfigError,
  XmlError,
  FocusUnresolved,
  NoData,
  UnknownSeed,
  UnknownEntity,
  RunClosed,
  AlreadyDecided,
  UnknownId,
  UnknownRun,
  StoreCorrupt,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bootlex
