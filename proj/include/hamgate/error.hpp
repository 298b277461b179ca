// Copyright 2026 The hamgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hamgate {

/** Failure categories raised by the library. */
enum class ErrorKind {
  NotUnitary,
  NotHermitian,
  NotDensityOperator,
  NotCommuting,
  NotCommutingInvolutory,
  BadIndex,
  DimMismatch,
  BranchLengthMismatch,
  UnknownGate,
  BadParamCount,
  DuplicateQubit,
  IndexOutOfRange,
  SyntaxError,
  TooLarge,
  TooFewQubits,
  BadAlpha,
  DegenerateDrive,
  InvalidArgument,
  Io,
  NumericalFailure,
};

inline constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotDensityOperator: return "NotDensityOperator";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::NotCommutingInvolutory: return "NotCommutingInvolutory";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::BranchLengthMismatch: return "BranchLengthMismatch";
    case ErrorKind::UnknownGate: return "UnknownGate";
    case ErrorKind::BadParamCount: return "BadParamCount";
    case ErrorKind::DuplicateQubit: return "DuplicateQubit";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::TooFewQubits: return "TooFewQubits";
    case ErrorKind::BadAlpha: return "BadAlpha";
    case ErrorKind::DegenerateDrive: return "DegenerateDrive";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/** Parse failure carrying the 1-based line of the offending input. */
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, int line, const std::string& what)
      : Error(kind, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace hamgate
