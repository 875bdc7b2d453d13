/* Copyright 2026 The irapguard Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef IRAPGUARD_SCHEDULE_H_
#define IRAPGUARD_SCHEDULE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace irapguard {

struct CongestionWindow {
  std::int64_t start_tick{0};
  std::int64_t duration_ticks{0};

  std::int64_t end_tick() const { return start_tick + duration_ticks; }
  bool operator==(const CongestionWindow &) const = default;
};

//! Congestion windows over simulated time. Windows are sorted, disjoint and
//! lie within [0, horizon_ticks). The generators below also merge windows
//! that touch, so each congestion episode produces a single notice.
struct CongestionSchedule {
  std::vector<CongestionWindow> windows;
  std::int64_t horizon_ticks{0};

  std::int64_t congested_ticks() const;
  //! congested_ticks / horizon, 0 for an empty horizon.
  double congestion_fraction() const;
  //! Throws Error{INVALID_PARAMS} when the invariants do not hold.
  void validate() const;

  bool operator==(const CongestionSchedule &) const = default;
};

//! Windows of `duration` ticks at t = 0, period, 2*period, ...; the last
//! one is truncated at the horizon.
//! Throws Error{INVALID_PERIOD} unless 0 <= duration <= period <= horizon.
CongestionSchedule periodic_schedule(std::int64_t period,
                                     std::int64_t duration,
                                     std::int64_t horizon);

//! Alternating congestion-free gaps and congestion windows with
//! geometrically distributed lengths (support >= 1), gap first.
//! Throws Error{INVALID_PARAMS} when a mean is below 1.
CongestionSchedule random_schedule(double mean_gap, double mean_duration,
                                   std::int64_t horizon, std::uint64_t seed);

//! Periodic slots starting at phase + k*period, sharing `congested_ticks`
//! ticks of congestion as evenly as integer durations allow. Raising
//! congested_ticks by one lengthens exactly one window by one tick, so the
//! congested set only ever grows; calibration bisects over this count.
CongestionSchedule duty_cycle_schedule(std::int64_t period,
                                       std::int64_t congested_ticks,
                                       std::int64_t horizon,
                                       std::int64_t phase = 0);

//! Most congested ticks duty_cycle_schedule() can place.
std::int64_t duty_cycle_capacity(std::int64_t period, std::int64_t horizon,
                                 std::int64_t phase = 0);

//! {"horizon": H, "windows": [[start, duration], ...]}
std::string schedule_json(const CongestionSchedule &schedule, int indent = 2);
//! Throws Error{PARSE_ERROR | INVALID_PARAMS}.
CongestionSchedule schedule_from_json(const std::string &text);

}  // namespace irapguard

#endif  // IRAPGUARD_SCHEDULE_H_
