#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geocube {

enum class ErrorCode {
  NonSquare,
  CodomainMismatch,
  NotTransverse,
  PosetCycle,
  DuplicateVertexSet,
  MalformedSpec,
  IntervalClosureFailure,
  UnknownFace,
  ParamTooSmall,
  WrongDegree,
  NotClosed,
  NonOrientable,
  ComplexMismatch,
  DegreeMismatch,
  NotInDualBasis,
  NotCocycle,
  NotCycle,
  SyntaxError,
  SemanticError,
  UnknownCorpusEntry,
};

constexpr std::string_view error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::CodomainMismatch: return "CodomainMismatch";
    case ErrorCode::NotTransverse: return "NotTransverse";
    case ErrorCode::PosetCycle: return "PosetCycle";
    case ErrorCode::DuplicateVertexSet: return "DuplicateVertexSet";
    case ErrorCode::MalformedSpec: return "MalformedSpec";
    case ErrorCode::IntervalClosureFailure: return "IntervalClosureFailure";
    case ErrorCode::UnknownFace: return "UnknownFace";
    case ErrorCode::ParamTooSmall: return "ParamTooSmall";
    case ErrorCode::WrongDegree: return "WrongDegree";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NonOrientable: return "NonOrientable";
    case ErrorCode::ComplexMismatch: return "ComplexMismatch";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::NotInDualBasis: return "NotInDualBasis";
    case ErrorCode::NotCocycle: return "NotCocycle";
    case ErrorCode::NotCycle: return "NotCycle";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SemanticError: return "SemanticError";
    case ErrorCode::UnknownCorpusEntry: return "UnknownCorpusEntry";
  }
  return "Unknown";
}

// Every library failure is one of these; the code is what callers branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace geocube
