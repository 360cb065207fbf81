#include "bootlex/error.hpp"

namespace bootlex {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::LayerMissing: return "LayerMissing";
    case ErrorCode::GrammarSyntaxError: return "GrammarSyntaxError";
    case ErrorCode::DuplicateRuleName: return "DuplicateRuleName";
    case ErrorCode::ResourceSyntaxError: return "ResourceSyntaxError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::XmlError: return "XmlError";
    case ErrorCode::FocusUnresolved: return "FocusUnresolved";
    case ErrorCode::NoData: return "NoData";
    case ErrorCode::UnknownSeed: return "UnknownSeed";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::RunClosed: return "RunClosed";
    case ErrorCode::AlreadyDecided: return "AlreadyDecided";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::UnknownRun: return "UnknownRun";
    case ErrorCode::StoreCorrupt: return "StoreCorrupt";
  }
  return "Error";
}

}  // namespace bootlex
