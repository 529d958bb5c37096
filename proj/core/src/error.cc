// Copyright 2026 The gscnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gsc/error.h"

namespace gsc {
namespace {

std::string Decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out(ErrorCodeName(code));
  out += ": ";
  if (line) out += "line " + std::to_string(*line) + ": ";
  out += message;
  return out;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid input";
    case ErrorCode::kDegenerateInput:
      return "degenerate input";
    case ErrorCode::kSizeGuard:
      return "size guard";
    case ErrorCode::kContractViolation:
      return "contract violation";
    case ErrorCode::kDataFormat:
      return "data format";
    case ErrorCode::kRowCountMismatch:
      return "row count mismatch";
    case ErrorCode::kLabelOutOfRange:
      return "label out of range";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kConfig:
      return "config";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(Decorate(code, message, line)),
      code_(code),
      line_(line) {}

}  // namespace gsc
