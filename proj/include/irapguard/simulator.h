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

#ifndef IRAPGUARD_SIMULATOR_H_
#define IRAPGUARD_SIMULATOR_H_

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "irapguard/packetizer.h"
#include "irapguard/policy.h"
#include "irapguard/schedule.h"

namespace irapguard {

//! Defaults model a line-rate device: 60 packets/tick in, 120 out, room for
//! 60 packets.
struct SimulationConfig {
  std::int64_t input_rate{60};
  std::int64_t output_rate{120};
  std::int64_t buffer_capacity{60};
  PolicyKind policy{PolicyKind::CONTENT_AWARE};
  PolicyOptions policy_options;
  std::size_t payload_size{kDefaultPayloadSize};
  int repeat{1};
  CongestionSchedule schedule;
  std::uint64_t seed{0};

  //! Throws Error{INVALID_CONFIG}.
  void validate() const;
};

enum class EventKind : std::uint8_t {
  ARRIVE,
  ENQUEUE,
  DROP_PREEMPTIVE,
  DROP_OVERFLOW,
  DEPART,
};

const char *event_kind_name(EventKind kind);

struct SimEvent {
  std::int64_t tick{0};
  EventKind kind{EventKind::ARRIVE};
  std::uint64_t packet_id{0};

  bool operator==(const SimEvent &) const = default;
};

struct ClassCounters {
  std::uint64_t arrived{0};
  std::uint64_t dropped_preemptive{0};
  std::uint64_t dropped_overflow{0};

  std::uint64_t dropped() const { return dropped_preemptive + dropped_overflow; }
};

struct NalCounters {
  std::uint64_t total{0};
  std::uint64_t lost{0};  // at least one fragment dropped
};

struct RunReport {
  std::uint64_t arrived{0};
  std::uint64_t departed{0};
  std::uint64_t dropped_preemptive{0};
  std::uint64_t dropped_overflow{0};
  std::uint64_t residual_in_buffer{0};
  std::int64_t ticks{0};

  std::array<ClassCounters, 3> packets_by_class{};  // indexed by NalClass
  std::array<NalCounters, 3> nals_by_class{};

  double overall_packet_loss_pct{0.0};
  double irap_packet_loss_pct{0.0};
  double irap_nal_loss_pct{0.0};

  SimulationConfig config;

  const ClassCounters &packets(NalClass cls) const {
    return packets_by_class[static_cast<std::size_t>(cls)];
  }
  const NalCounters &nals(NalClass cls) const {
    return nals_by_class[static_cast<std::size_t>(cls)];
  }
  std::uint64_t dropped() const { return dropped_preemptive + dropped_overflow; }
};

struct RunOptions {
  bool record_events{true};
};

struct RunResult {
  RunReport report;
  std::vector<SimEvent> events;  // empty unless RunOptions::record_events
};

//! Runs one deterministic discrete-tick simulation. Per tick t:
//!   1. a congestion window starting at t notifies the policy;
//!   2. outside congestion, up to output_rate queued packets depart;
//!   3. up to input_rate packets arrive; each is dropped on the policy's
//!      recommendation, tail-dropped if the buffer is full, or enqueued;
//!   4. egress capacity left over from step 2 forwards packets admitted in
//!      step 3 (so with output_rate >= input_rate nothing lingers);
//!   5. the policy timer ticks.
//! Ends once the source is exhausted and the buffer is empty (or cannot
//! drain because output_rate is 0).
//! Throws Error{INVALID_CONFIG | EMPTY_STREAM}.
RunResult run(const SimulationConfig &config,
              std::span<const PacketDescriptor> packets,
              RunOptions options = {});

struct ReplayResult {
  bool ok{true};
  std::string violation;  // first violation found

  explicit operator bool() const { return ok; }
};

//! Re-validates an event log against the device model: one outcome per
//! arrival, FIFO departures, per-tick rate limits, no egress during
//! congestion, and occupancy within [0, capacity] after every event.
ReplayResult replay_check(std::span<const SimEvent> events,
                          const SimulationConfig &config);

//! Ticks a stream of `packet_count` packets needs to arrive.
std::int64_t arrival_span_ticks(std::size_t packet_count,
                                std::int64_t input_rate);

std::string run_report_json(const RunReport &report, int indent = 2);
//! `tick,kind,packet_id` header plus one line per event.
void write_events_csv(std::ostream &out, std::span<const SimEvent> events);

}  // namespace irapguard

#endif  // IRAPGUARD_SIMULATOR_H_
