// Copyright 2026 The cloudsel Authors
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

#ifndef CLOUDSEL_ERRORS_HPP
#define CLOUDSEL_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cloudsel {

/// Base for every domain error raised by the engine.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed catalog or configuration document.
class parse_error : public error {
 public:
  using error::error;
};

/// Broken structural invariant on an input value (non-contiguous tiers,
/// non-reciprocal matrix, mismatched vector lengths).
class invariant_error : public error {
 public:
  using error::error;
};

/// A request parameter failed validation. `parameter()` names the offender
/// so the REST layer can report it verbatim.
class bad_request : public error {
 public:
  bad_request(std::string parameter, const std::string& message)
      : error(message), parameter_(std::move(parameter)) {}

  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string parameter_;
};

/// Pairwise judgments whose consistency ratio exceeds the configured limit.
class inconsistent_judgments : public error {
 public:
  inconsistent_judgments(double ratio, double threshold);

  double consistency_ratio() const noexcept { return ratio_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double ratio_;
  double threshold_;
};

struct Violation {
  std::string entity;  // e.g. "storage_offers[s3]"
  std::string field;
  std::string rule;

  std::string to_string() const { return entity + "." + field + ": " + rule; }
  friend bool operator==(const Violation&, const Violation&) = default;
};

class validation_error : public error {
 public:
  explicit validation_error(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace cloudsel

#endif  // CLOUDSEL_ERRORS_HPP
