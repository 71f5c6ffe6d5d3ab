#pragma once

#include <stdexcept>
#include <string>

namespace xmk {

enum class ErrorCode {
  NotAssociative,
  NoIdentity,
  NotLatinSquare,
  SizeExceeded,
  FibreNotAbelian,
  BoundaryMismatch,
  MultiStrand,
  OpenBoundary,
  InvalidColoring,
  PatternMismatch,
  NoDotOnComponent,
  SiteMismatch,
  DeathOnKnottedCircle,
  InvalidMovie,
  NotApplicable,
  ParseError,
  ValidationError,
  Internal,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotAssociative: return "NotAssociative";
    case ErrorCode::NoIdentity: return "NoIdentity";
    case ErrorCode::NotLatinSquare: return "NotLatinSquare";
    case ErrorCode::SizeExceeded: return "SizeExceeded";
    case ErrorCode::FibreNotAbelian: return "FibreNotAbelian";
    case ErrorCode::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorCode::MultiStrand: return "MultiStrand";
    case ErrorCode::OpenBoundary: return "OpenBoundary";
    case ErrorCode::InvalidColoring: return "InvalidColoring";
    case ErrorCode::PatternMismatch: return "PatternMismatch";
    case ErrorCode::NoDotOnComponent: return "NoDotOnComponent";
    case ErrorCode::SiteMismatch: return "SiteMismatch";
    case ErrorCode::DeathOnKnottedCircle: return "DeathOnKnottedCircle";
    case ErrorCode::InvalidMovie: return "InvalidMovie";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::Internal: return "Internal";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace xmk
