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

#ifndef IRAPGUARD_SWEEP_H_
#define IRAPGUARD_SWEEP_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irapguard/calibrate.h"
#include "irapguard/report.h"
#include "irapguard/simulator.h"

namespace irapguard {

struct SweepStream {
  StreamMetadata meta;
  std::vector<PacketDescriptor> packets;
};

//! Packetizes `units` and fills the metadata for one sweep stream.
SweepStream make_sweep_stream(std::string id, std::span<const NalUnit> units,
                              std::size_t payload_size, int repeat,
                              std::map<std::string, std::string> tags = {});

struct SweepOptions {
  SimulationConfig base;  // rates, buffer, seed; schedule is calibrated
  std::vector<double> targets{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  PolicyKind policy{PolicyKind::CONTENT_AWARE};
  CalibrationOptions calibration;
  int jobs{1};
  // Record event logs and check them with replay_check (slower).
  bool verify_replay{false};
};

//! One cell per (stream, target): calibrate a schedule on the tail-drop
//! baseline, then run baseline and policy on that same schedule. Cells are
//! returned in (stream, target) order regardless of `jobs`.
std::vector<SweepCell> run_sweep(std::span<const SweepStream> streams,
                                 const SweepOptions &options);

//! "5:50:5" (inclusive range) or "5,10,20". Throws Error{PARSE_ERROR}.
std::vector<double> parse_targets(std::string_view text);

}  // namespace irapguard

#endif  // IRAPGUARD_SWEEP_H_
