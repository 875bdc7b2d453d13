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

#include "irapguard/schedule.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "irapguard/error.h"
#include "irapguard/random.h"

namespace irapguard {

std::int64_t CongestionSchedule::congested_ticks() const {
  std::int64_t total = 0;
  for (const auto &w : windows) total += w.duration_ticks;
  return total;
}

double CongestionSchedule::congestion_fraction() const {
  if (horizon_ticks <= 0) return 0.0;
  return static_cast<double>(congested_ticks()) /
         static_cast<double>(horizon_ticks);
}

void CongestionSchedule::validate() const {
  auto fail = [](const std::string &msg) {
    throw Error(ErrorCode::INVALID_PARAMS, "schedule: " + msg);
  };
  if (horizon_ticks < 0) fail("negative horizon");
  std::int64_t prev_end = 0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto &w = windows[i];
    if (w.duration_ticks < 1) fail("window " + std::to_string(i) + " has no duration");
    if (w.start_tick < prev_end) {
      fail("window " + std::to_string(i) + " overlaps or is out of order");
    }
    if (w.end_tick() > horizon_ticks) {
      fail("window " + std::to_string(i) + " extends past the horizon");
    }
    prev_end = w.end_tick();
  }
}

namespace {

void push_merged(std::vector<CongestionWindow> &out, CongestionWindow w) {
  if (w.duration_ticks <= 0) return;
  if (!out.empty() && out.back().end_tick() == w.start_tick) {
    out.back().duration_ticks += w.duration_ticks;
  } else {
    out.push_back(w);
  }
}

}  // namespace

CongestionSchedule periodic_schedule(std::int64_t period, std::int64_t duration,
                                     std::int64_t horizon) {
  if (period < 1 || duration < 0 || duration > period || period > horizon) {
    throw Error(ErrorCode::INVALID_PERIOD,
                "periodic schedule needs 0 <= duration <= period <= horizon "
                "and period >= 1 (period=" + std::to_string(period) +
                    ", duration=" + std::to_string(duration) +
                    ", horizon=" + std::to_string(horizon) + ")");
  }
  CongestionSchedule s;
  s.horizon_ticks = horizon;
  for (std::int64_t start = 0; start < horizon; start += period) {
    push_merged(s.windows, {start, std::min(duration, horizon - start)});
  }
  return s;
}

CongestionSchedule random_schedule(double mean_gap, double mean_duration,
                                   std::int64_t horizon, std::uint64_t seed) {
  if (!(mean_gap >= 1.0) || !(mean_duration >= 1.0)) {
    throw Error(ErrorCode::INVALID_PARAMS,
                "random schedule means must be >= 1");
  }
  if (horizon < 0) throw Error(ErrorCode::INVALID_PARAMS, "negative horizon");

  std::mt19937_64 engine(seed);
  // Geometric on {1, 2, ...} with the given mean, by inversion.
  auto draw = [&engine](double mean) -> std::int64_t {
    if (mean <= 1.0) return 1;
    const double u = 1.0 - unit_interval(engine());  // (0, 1]
    const double k = std::floor(std::log(u) / std::log1p(-1.0 / mean));
    return 1 + static_cast<std::int64_t>(std::min(k, 1e15));
  };

  CongestionSchedule s;
  s.horizon_ticks = horizon;
  std::int64_t t = 0;
  while (t < horizon) {
    t += draw(mean_gap);
    if (t >= horizon) break;
    const std::int64_t d = std::min(draw(mean_duration), horizon - t);
    s.windows.push_back({t, d});
    t += d;
  }
  return s;
}

namespace {

struct Slot {
  std::int64_t start;
  std::int64_t cap;
};

std::vector<Slot> duty_cycle_slots(std::int64_t period, std::int64_t horizon,
                                   std::int64_t phase) {
  if (period < 1 || phase < 0 || phase >= period || horizon < 0) {
    throw Error(ErrorCode::INVALID_PERIOD,
                "duty-cycle schedule needs period >= 1 and 0 <= phase < period");
  }
  std::vector<Slot> slots;
  for (std::int64_t start = phase; start < horizon; start += period)
    slots.push_back({start, std::min(period, horizon - start)});
  return slots;
}

}  // namespace

std::int64_t duty_cycle_capacity(std::int64_t period, std::int64_t horizon,
                                 std::int64_t phase) {
  std::int64_t total = 0;
  for (const Slot &s : duty_cycle_slots(period, horizon, phase)) total += s.cap;
  return total;
}

CongestionSchedule duty_cycle_schedule(std::int64_t period,
                                       std::int64_t congested_ticks,
                                       std::int64_t horizon,
                                       std::int64_t phase) {
  const std::vector<Slot> slots = duty_cycle_slots(period, horizon, phase);
  std::int64_t capacity = 0;
  for (const Slot &s : slots) capacity += s.cap;
  if (congested_ticks < 0 || congested_ticks > capacity) {
    throw Error(ErrorCode::INVALID_PARAMS,
                "congested_ticks " + std::to_string(congested_ticks) +
                    " outside [0, " + std::to_string(capacity) + "]");
  }

  // Slots receive their next tick in golden-ratio order so that extra ticks
  // spread across the stream instead of piling up at its start.
  std::vector<std::size_t> order(slots.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  constexpr double kGolden = 0.6180339887498949;
  auto key = [](std::size_t k) {
    const double x = static_cast<double>(k) * kGolden;
    return x - std::floor(x);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  std::vector<std::int64_t> duration(slots.size(), 0);
  std::int64_t remaining = congested_ticks;
  for (std::int64_t level = 1; remaining > 0; ++level) {
    for (std::size_t k : order) {
      if (remaining == 0) break;
      if (slots[k].cap >= level) {
        ++duration[k];
        --remaining;
      }
    }
  }

  CongestionSchedule s;
  s.horizon_ticks = horizon;
  for (std::size_t k = 0; k < slots.size(); ++k)
    push_merged(s.windows, {slots[k].start, duration[k]});
  return s;
}

std::string schedule_json(const CongestionSchedule &schedule, int indent) {
  nlohmann::ordered_json j;
  j["horizon"] = schedule.horizon_ticks;
  j["windows"] = nlohmann::ordered_json::array();
  for (const auto &w : schedule.windows)
    j["windows"].push_back({w.start_tick, w.duration_ticks});
  return j.dump(indent);
}

CongestionSchedule schedule_from_json(const std::string &text) {
  CongestionSchedule s;
  try {
    const auto j = nlohmann::json::parse(text);
    s.horizon_ticks = j.at("horizon").get<std::int64_t>();
    for (const auto &w : j.at("windows")) {
      if (!w.is_array() || w.size() != 2) {
        throw Error(ErrorCode::PARSE_ERROR,
                    "schedule: each window must be [start, duration]");
      }
      s.windows.push_back({w[0].get<std::int64_t>(), w[1].get<std::int64_t>()});
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::PARSE_ERROR, std::string("schedule: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace irapguard
