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

#ifndef IRAPGUARD_CALIBRATE_H_
#define IRAPGUARD_CALIBRATE_H_

#include <cstdint>
#include <span>
#include <string>

#include "irapguard/schedule.h"
#include "irapguard/simulator.h"

namespace irapguard {

struct CalibrationOptions {
  std::int64_t period{100};
  int max_iterations{40};
  double tolerance_pp{0.5};
};

struct CalibrationResult {
  CongestionSchedule schedule;
  double target_loss_pct{0.0};
  double achieved_loss_pct{0.0};
  std::int64_t period{0};
  std::int64_t phase{0};
  std::int64_t congested_ticks{0};
  int iterations{0};
  bool within_tolerance{false};
};

//! Slot offset used for a given seed; seed 0 keeps windows at t = 0.
std::int64_t calibration_phase(std::uint64_t seed, std::int64_t period);

//! Finds a duty-cycle schedule under which the tail-drop baseline loses
//! `target_loss_pct` percent of all packets, by bisection over the number of
//! congested ticks. The policy field of `config_template` is ignored.
//! Throws Error{INVALID_PARAMS | UNREACHABLE | INVALID_CONFIG | EMPTY_STREAM}.
CalibrationResult calibrate(double target_loss_pct,
                            const SimulationConfig &config_template,
                            std::span<const PacketDescriptor> packets,
                            const CalibrationOptions &options = {});

std::string calibration_json(const CalibrationResult &result, int indent = 2);

}  // namespace irapguard

#endif  // IRAPGUARD_CALIBRATE_H_
