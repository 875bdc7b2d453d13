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

#include "irapguard/simulator.h"

#include <deque>
#include <memory>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "irapguard/error.h"
#include "json_util.h"

namespace irapguard {

void SimulationConfig::validate() const {
  auto fail = [](const std::string &msg) {
    throw Error(ErrorCode::INVALID_CONFIG, msg);
  };
  if (input_rate < 1) fail("input_rate must be >= 1");
  if (output_rate < 0) fail("output_rate must be >= 0");
  if (buffer_capacity < 1) fail("buffer_capacity must be >= 1");
  if (payload_size < 1) fail("payload_size must be >= 1");
  if (repeat < 1) fail("repeat must be >= 1");
  try {
    schedule.validate();
  } catch (const Error &e) {
    fail(e.what());
  }
}

const char *event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::ARRIVE: return "ARRIVE";
    case EventKind::ENQUEUE: return "ENQUEUE";
    case EventKind::DROP_PREEMPTIVE: return "DROP_PREEMPTIVE";
    case EventKind::DROP_OVERFLOW: return "DROP_OVERFLOW";
    case EventKind::DEPART: return "DEPART";
  }
  return "?";
}

std::int64_t arrival_span_ticks(std::size_t packet_count,
                                std::int64_t input_rate) {
  const auto n = static_cast<std::int64_t>(packet_count);
  return (n + input_rate - 1) / input_rate;
}

namespace {

double pct(std::uint64_t part, std::uint64_t whole) {
  return whole == 0 ? 0.0
                    : 100.0 * static_cast<double>(part) /
                          static_cast<double>(whole);
}

// Fixed-capacity FIFO of packet indices.
class PacketRing {
 public:
  explicit PacketRing(std::size_t capacity) : slots_(capacity) { }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool full() const { return size_ == slots_.size(); }

  void push(std::size_t v) {
    slots_[(head_ + size_) % slots_.size()] = v;
    ++size_;
  }
  std::size_t pop() {
    const std::size_t v = slots_[head_];
    head_ = (head_ + 1) % slots_.size();
    --size_;
    return v;
  }

 private:
  std::vector<std::size_t> slots_;
  std::size_t head_{0};
  std::size_t size_{0};
};

}  // namespace

RunResult run(const SimulationConfig &config,
              std::span<const PacketDescriptor> packets, RunOptions options) {
  config.validate();
  if (packets.empty()) throw Error(ErrorCode::EMPTY_STREAM, "no packets to simulate");

  RunResult result;
  RunReport &rep = result.report;
  rep.config = config;
  auto &events = result.events;
  if (options.record_events) events.reserve(packets.size() * 3);
  auto log = [&](std::int64_t tick, EventKind kind, std::uint64_t id) {
    if (options.record_events) events.push_back({tick, kind, id});
  };

  std::unique_ptr<DropPolicy> policy =
      make_policy(config.policy, config.input_rate, config.policy_options);
  PacketRing buffer(static_cast<std::size_t>(config.buffer_capacity));

  std::uint64_t nal_instances = 0;
  for (const auto &p : packets) nal_instances = std::max(nal_instances, p.nal_index + 1);
  std::vector<std::uint8_t> nal_lost(nal_instances, 0);

  const auto &windows = config.schedule.windows;
  std::size_t win = 0;
  std::size_t next = 0;

  auto depart = [&](std::int64_t tick, std::int64_t &budget) {
    while (budget > 0 && !buffer.empty()) {
      log(tick, EventKind::DEPART, packets[buffer.pop()].packet_id);
      ++rep.departed;
      --budget;
    }
  };

  std::int64_t tick = 0;
  for (;; ++tick) {
    while (win < windows.size() && windows[win].end_tick() <= tick) ++win;
    const bool congested = win < windows.size() && windows[win].start_tick <= tick;
    if (congested && windows[win].start_tick == tick) {
      policy->on_congestion_start({tick, windows[win].duration_ticks});
    }

    // During congestion the egress rate drops to zero.
    std::int64_t budget = congested ? 0 : config.output_rate;
    depart(tick, budget);

    for (std::int64_t k = 0; k < config.input_rate && next < packets.size(); ++k) {
      const std::size_t idx = next++;
      const PacketDescriptor &p = packets[idx];
      ClassCounters &cc = rep.packets_by_class[static_cast<std::size_t>(p.cls)];
      ++rep.arrived;
      ++cc.arrived;
      if (p.fragment_index == 0)
        ++rep.nals_by_class[static_cast<std::size_t>(p.cls)].total;
      log(tick, EventKind::ARRIVE, p.packet_id);

      const BufferState state{config.buffer_capacity,
                              static_cast<std::int64_t>(buffer.size())};
      if (policy->recommend(p, state).recommend_drop) {
        log(tick, EventKind::DROP_PREEMPTIVE, p.packet_id);
        ++rep.dropped_preemptive;
        ++cc.dropped_preemptive;
        nal_lost[p.nal_index] = 1;
      } else if (buffer.full()) {
        log(tick, EventKind::DROP_OVERFLOW, p.packet_id);
        ++rep.dropped_overflow;
        ++cc.dropped_overflow;
        nal_lost[p.nal_index] = 1;
      } else {
        log(tick, EventKind::ENQUEUE, p.packet_id);
        buffer.push(idx);
      }
    }

    depart(tick, budget);
    policy->on_tick();

    if (next == packets.size() && (buffer.empty() || config.output_rate == 0)) break;
  }
  rep.ticks = tick + 1;
  rep.residual_in_buffer = buffer.size();

  // NAL-level loss, attributed to the class of the owning NAL.
  std::vector<NalClass> nal_class(nal_instances, NalClass::NON_VCL);
  for (const auto &p : packets) nal_class[p.nal_index] = p.cls;
  for (std::uint64_t n = 0; n < nal_instances; ++n) {
    if (nal_lost[n]) ++rep.nals_by_class[static_cast<std::size_t>(nal_class[n])].lost;
  }

  const ClassCounters &irap = rep.packets(NalClass::IRAP_VCL);
  rep.overall_packet_loss_pct = pct(rep.dropped(), rep.arrived);
  rep.irap_packet_loss_pct = pct(irap.dropped(), irap.arrived);
  rep.irap_nal_loss_pct = pct(rep.nals(NalClass::IRAP_VCL).lost,
                              rep.nals(NalClass::IRAP_VCL).total);
  return result;
}

ReplayResult replay_check(std::span<const SimEvent> events,
                          const SimulationConfig &config) {
  enum class State : std::uint8_t { ARRIVED, QUEUED, DONE };
  std::unordered_map<std::uint64_t, State> state;
  std::deque<std::uint64_t> fifo;
  std::int64_t current_tick = events.empty() ? 0 : events.front().tick;
  std::int64_t arrivals_this_tick = 0;
  std::int64_t departures_this_tick = 0;
  bool have_arrival = false;
  std::uint64_t last_arrival = 0;
  const auto &windows = config.schedule.windows;
  std::size_t win = 0;

  auto fail = [](std::size_t i, const SimEvent &e, const std::string &msg) {
    return ReplayResult{false, "event " + std::to_string(i) + " (tick " +
                                   std::to_string(e.tick) + ", " +
                                   event_kind_name(e.kind) + ", packet " +
                                   std::to_string(e.packet_id) + "): " + msg};
  };

  for (std::size_t i = 0; i < events.size(); ++i) {
    const SimEvent &e = events[i];
    if (e.tick < current_tick) return fail(i, e, "tick goes backwards");
    if (e.tick != current_tick) {
      current_tick = e.tick;
      arrivals_this_tick = 0;
      departures_this_tick = 0;
    }
    auto it = state.find(e.packet_id);
    switch (e.kind) {
      case EventKind::ARRIVE:
        if (it != state.end()) return fail(i, e, "packet arrives twice");
        if (have_arrival && e.packet_id <= last_arrival)
          return fail(i, e, "arrivals out of source order");
        if (++arrivals_this_tick > config.input_rate)
          return fail(i, e, "more arrivals than input_rate in one tick");
        // The previous arrival must already be resolved.
        if (have_arrival && state[last_arrival] == State::ARRIVED)
          return fail(i, e, "previous arrival has no outcome");
        state.emplace(e.packet_id, State::ARRIVED);
        have_arrival = true;
        last_arrival = e.packet_id;
        break;
      case EventKind::ENQUEUE:
      case EventKind::DROP_PREEMPTIVE:
      case EventKind::DROP_OVERFLOW:
        if (it == state.end() || it->second != State::ARRIVED)
          return fail(i, e, "outcome without a pending arrival");
        if (e.kind == EventKind::ENQUEUE) {
          if (static_cast<std::int64_t>(fifo.size()) >= config.buffer_capacity)
            return fail(i, e, "occupancy exceeds buffer capacity");
          fifo.push_back(e.packet_id);
          it->second = State::QUEUED;
        } else {
          if (e.kind == EventKind::DROP_OVERFLOW &&
              static_cast<std::int64_t>(fifo.size()) < config.buffer_capacity)
            return fail(i, e, "overflow drop with free buffer space");
          it->second = State::DONE;
        }
        break;
      case EventKind::DEPART: {
        if (it == state.end() || it->second != State::QUEUED)
          return fail(i, e, "departure without enqueue");
        if (fifo.empty() || fifo.front() != e.packet_id)
          return fail(i, e, "departure breaks FIFO order");
        while (win < windows.size() && windows[win].end_tick() <= e.tick) ++win;
        if (win < windows.size() && windows[win].start_tick <= e.tick)
          return fail(i, e, "departure during congestion");
        if (++departures_this_tick > config.output_rate)
          return fail(i, e, "more departures than output_rate in one tick");
        fifo.pop_front();
        it->second = State::DONE;
        break;
      }
    }
  }
  if (have_arrival && state[last_arrival] == State::ARRIVED) {
    return {false, "final arrival (packet " + std::to_string(last_arrival) +
                       ") has no outcome"};
  }
  return {};
}

std::string run_report_json(const RunReport &r, int indent) {
  nlohmann::ordered_json j;
  j["policy"] = policy_name(r.config.policy);
  nlohmann::ordered_json totals;
  totals["arrived"] = r.arrived;
  totals["departed"] = r.departed;
  totals["dropped_preemptive"] = r.dropped_preemptive;
  totals["dropped_overflow"] = r.dropped_overflow;
  totals["residual_in_buffer"] = r.residual_in_buffer;
  totals["ticks"] = r.ticks;
  j["totals"] = totals;

  nlohmann::ordered_json by_class;
  for (NalClass cls : kAllNalClasses) {
    const ClassCounters &c = r.packets(cls);
    const NalCounters &n = r.nals(cls);
    nlohmann::ordered_json jc;
    jc["packets_arrived"] = c.arrived;
    jc["packets_dropped_preemptive"] = c.dropped_preemptive;
    jc["packets_dropped_overflow"] = c.dropped_overflow;
    jc["nals"] = n.total;
    jc["nals_lost"] = n.lost;
    by_class[nal_class_name(cls)] = jc;
  }
  j["by_class"] = by_class;
  j["overall_packet_loss_pct"] = round4(r.overall_packet_loss_pct);
  j["irap_packet_loss_pct"] = round4(r.irap_packet_loss_pct);
  j["irap_nal_loss_pct"] = round4(r.irap_nal_loss_pct);

  const SimulationConfig &c = r.config;
  nlohmann::ordered_json cfg;
  cfg["input_rate"] = c.input_rate;
  cfg["output_rate"] = c.output_rate;
  cfg["buffer_capacity"] = c.buffer_capacity;
  cfg["policy"] = policy_name(c.policy);
  cfg["protect_non_vcl"] = c.policy_options.protect_non_vcl;
  cfg["payload_size"] = c.payload_size;
  cfg["repeat"] = c.repeat;
  cfg["seed"] = c.seed;
  cfg["schedule_horizon"] = c.schedule.horizon_ticks;
  cfg["schedule_windows"] = c.schedule.windows.size();
  cfg["congestion_fraction_pct"] = round4(100.0 * c.schedule.congestion_fraction());
  j["config"] = cfg;
  return j.dump(indent);
}

void write_events_csv(std::ostream &out, std::span<const SimEvent> events) {
  out << "tick,kind,packet_id\n";
  for (const SimEvent &e : events)
    out << e.tick << ',' << event_kind_name(e.kind) << ',' << e.packet_id << '\n';
}

}  // namespace irapguard
