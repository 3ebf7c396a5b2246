// Copyright 2026 The geoind Authors
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

#ifndef GEOIND_ERROR_HPP_
#define GEOIND_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace geoind {

enum class ErrorCode {
  kDomain,            // argument outside the mathematical domain
  kCoordinateRange,   // latitude/longitude out of range
  kParse,             // malformed input file
  kDuplicateId,       // repeated site id within a dataset
  kInvalidMask,       // malformed region polygon
  kExhausted,         // constrained perturbation ran out of attempts
  kEmptyInput,        // empty cloud or dataset where one is required
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return "domain_error";
    case ErrorCode::kCoordinateRange: return "coordinate_out_of_range";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kDuplicateId: return "duplicate_id";
    case ErrorCode::kInvalidMask: return "invalid_mask";
    case ErrorCode::kExhausted: return "attempts_exhausted";
    case ErrorCode::kEmptyInput: return "empty_input";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by constrained perturbation when no draw landed inside the mask.
class ExhaustedError : public Error {
 public:
  explicit ExhaustedError(int attempts)
      : Error(ErrorCode::kExhausted,
              "no perturbed point fell inside the region mask after " +
                  std::to_string(attempts) +
                  " attempts; the mask is too tight for this epsilon"),
        attempts_(attempts) {}

  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

// Parse failure; `index` is the 1-based CSV line or 0-based GeoJSON feature.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t index, const std::string& message)
      : Error(code, message), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace geoind

#endif  // GEOIND_ERROR_HPP_
