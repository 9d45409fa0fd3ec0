// Copyright 2026 The satkey Authors
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

#ifndef SATKEY_ERRORS_HPP
#define SATKEY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace satkey {

// Error categories; values match the status codes of the public C API.
enum class ErrorCode : int {
  kInvalidArgument = 1,   // precondition violated (bad numeric input)
  kDomain = 2,            // argument outside the mathematical domain
  kInconsistent = 3,      // mutually inconsistent inputs (e.g. Pm > R)
  kEstimatorInvalid = 4,  // estimator denominator non-positive
  kInsufficientData = 5,  // not enough counts/samples to evaluate
  kParse = 6,             // scenario file syntax error
  kIo = 7,                // file I/O failure
  kInfeasible = 8,        // optimizer budget infeasible
  kNoDetections = 9,      // zero detection probability where one is required
  kBoundsCollapse = 10,   // decoy bounds give no provable single-photon part
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace satkey

#endif  // SATKEY_ERRORS_HPP
