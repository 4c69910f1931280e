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

#ifndef CLOUDSEL_BUNDLE_HPP
#define CLOUDSEL_BUNDLE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cloudsel {

/// One compute + storage + transfer combination. A component left empty is
/// not part of the selection (and costs nothing).
struct Bundle {
  std::optional<std::string> compute_id;
  std::optional<std::string> storage_id;
  std::optional<std::string> transfer_id;
  std::vector<std::string> region_ids;  // region of each present offer, in component order
  std::map<std::string, double> criteria_values;

  std::vector<std::string> offer_ids() const {
    std::vector<std::string> ids;
    for (const auto* id : {&compute_id, &storage_id, &transfer_id})
      if (*id) ids.push_back(**id);
    return ids;
  }

  /// "compute|storage|transfer" with '-' for absent components.
  std::string key() const {
    auto part = [](const std::optional<std::string>& id) { return id ? *id : std::string("-"); };
    return part(compute_id) + "|" + part(storage_id) + "|" + part(transfer_id);
  }
};

}  // namespace cloudsel

#endif  // CLOUDSEL_BUNDLE_HPP
