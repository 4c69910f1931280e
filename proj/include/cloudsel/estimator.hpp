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

#ifndef CLOUDSEL_ESTIMATOR_HPP
#define CLOUDSEL_ESTIMATOR_HPP

#include <cstdint>

namespace cloudsel {

inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kSecondsPerYear = 365.0 * 24.0 * kSecondsPerHour;
inline constexpr double kKiBPerGB = 1024.0 * 1024.0;

/// An embarrassingly parallel batch job, assumed to scale linearly.
struct BatchWorkload {
  double task_count = 0.0;
  double per_task_time = 0.0;  // seconds
  std::int64_t vm_count = 1;
  std::int64_t threads_per_vm = 1;

  double serial_seconds() const { return task_count * per_task_time; }
};

struct TrafficWorkload {
  double monthly_visitors = 0.0;
  double page_size = 0.0;  // KiB
  double pages_per_visitor = 1.0;
};

/// Wall-clock hours with vm_count * threads_per_vm workers. Throws
/// bad_request when a quantity is non-positive.
double estimate_batch_runtime(const BatchWorkload& w);

/// Serial processing time in years (365-day years).
double serial_runtime_years(const BatchWorkload& w);

/// Smallest worker count that meets `deadline_hours` (vm_count and
/// threads_per_vm of `w` are ignored).
std::int64_t required_parallelism(const BatchWorkload& w, double deadline_hours);

/// Monthly download volume in binary GB.
double estimate_monthly_traffic(const TrafficWorkload& w);

}  // namespace cloudsel

#endif  // CLOUDSEL_ESTIMATOR_HPP
