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

#include "cloudsel/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "cloudsel/errors.hpp"

namespace cloudsel {

namespace {

void check_work(const BatchWorkload& w) {
  if (!(w.task_count > 0.0)) throw bad_request("tasks", "task count must be positive");
  if (!(w.per_task_time > 0.0)) throw bad_request("per_task_time", "per-task time must be positive");
}

}  // namespace

double estimate_batch_runtime(const BatchWorkload& w) {
  check_work(w);
  if (w.vm_count < 1) throw bad_request("vms", "at least one VM is required");
  if (w.threads_per_vm < 1) throw bad_request("threads", "at least one thread per VM is required");
  const double workers = static_cast<double>(w.vm_count) * static_cast<double>(w.threads_per_vm);
  return w.serial_seconds() / workers / kSecondsPerHour;
}

double serial_runtime_years(const BatchWorkload& w) {
  check_work(w);
  return w.serial_seconds() / kSecondsPerYear;
}

std::int64_t required_parallelism(const BatchWorkload& w, double deadline_hours) {
  check_work(w);
  if (!(deadline_hours > 0.0)) throw bad_request("deadline", "deadline must be positive");
  const double workers = w.serial_seconds() / (deadline_hours * kSecondsPerHour);
  // A quotient that is an integer up to rounding noise must not round up.
  const double snapped = std::nearbyint(workers);
  const double needed = std::abs(workers - snapped) <= 1e-9 * snapped ? snapped : std::ceil(workers);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(needed));
}

double estimate_monthly_traffic(const TrafficWorkload& w) {
  if (!(w.monthly_visitors >= 0.0)) throw bad_request("visitors", "visitor count must be non-negative");
  if (!(w.page_size >= 0.0)) throw bad_request("page_size", "page size must be non-negative");
  if (!(w.pages_per_visitor >= 0.0)) throw bad_request("pages", "pages per visitor must be non-negative");
  return w.monthly_visitors * w.pages_per_visitor * w.page_size / kKiBPerGB;
}

}  // namespace cloudsel
