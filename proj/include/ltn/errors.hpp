// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#ifndef LTN_ERRORS_HPP
#define LTN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ltn {

enum class ErrorCode {
  Internal = 1,
  // configuration / validation
  ConfigInvalid,
  OverlapTooSmall,
  InconsistentIntervals,
  HorizonNotResolved,
  RegionTooSmall,
  MissingBoundaryLayer,
  ModeMismatch,
  IncompleteVolumeConstraint,
  ZeroBond,
  InvalidRobin,
  IllPosedCoupling,
  // solver
  SingularSystem,
  RankDeficientCoupling,
  ReducedSystemSingular,
  NotConverged,
  // io
  IoFailure,
};

/// Exception carrying a machine-readable code next to the human message.
class LtnError : public std::runtime_error {
 public:
  LtnError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Internal: return "Internal";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::OverlapTooSmall: return "OverlapTooSmall";
    case ErrorCode::InconsistentIntervals: return "InconsistentIntervals";
    case ErrorCode::HorizonNotResolved: return "HorizonNotResolved";
    case ErrorCode::RegionTooSmall: return "RegionTooSmall";
    case ErrorCode::MissingBoundaryLayer: return "MissingBoundaryLayer";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::IncompleteVolumeConstraint: return "IncompleteVolumeConstraint";
    case ErrorCode::ZeroBond: return "ZeroBond";
    case ErrorCode::InvalidRobin: return "InvalidRobin";
    case ErrorCode::IllPosedCoupling: return "IllPosedCoupling";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::RankDeficientCoupling: return "RankDeficientCoupling";
    case ErrorCode::ReducedSystemSingular: return "ReducedSystemSingular";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw LtnError(code, std::string(error_code_name(code)) + ": " + msg);
}

}  // namespace ltn

#endif
