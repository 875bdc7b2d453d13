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

#include "irapguard/calibrate.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "irapguard/error.h"
#include "irapguard/random.h"
#include "json_util.h"

namespace irapguard {

std::int64_t calibration_phase(std::uint64_t seed, std::int64_t period) {
  if (seed == 0 || period <= 1) return 0;
  return static_cast<std::int64_t>(mix64(seed) % static_cast<std::uint64_t>(period));
}

CalibrationResult calibrate(double target_loss_pct,
                            const SimulationConfig &config_template,
                            std::span<const PacketDescriptor> packets,
                            const CalibrationOptions &options) {
  if (!(target_loss_pct >= 0.0 && target_loss_pct <= 100.0)) {
    throw Error(ErrorCode::INVALID_PARAMS, "target loss must be in [0, 100]");
  }
  if (options.period < 1 || options.max_iterations < 1) {
    throw Error(ErrorCode::INVALID_PARAMS, "calibration period and iteration cap must be >= 1");
  }
  if (packets.empty()) throw Error(ErrorCode::EMPTY_STREAM, "no packets to calibrate on");

  SimulationConfig cfg = config_template;
  cfg.policy = PolicyKind::TAIL_DROP;
  cfg.schedule = {};
  cfg.validate();

  const std::int64_t horizon = arrival_span_ticks(packets.size(), cfg.input_rate);
  const std::int64_t period = std::min(options.period, std::max<std::int64_t>(horizon, 1));
  const std::int64_t phase = calibration_phase(cfg.seed, period);
  const std::int64_t max_ticks = duty_cycle_capacity(period, horizon, phase);

  int iterations = 0;
  auto loss_at = [&](std::int64_t ticks) {
    ++iterations;
    cfg.schedule = duty_cycle_schedule(period, ticks, horizon, phase);
    return run(cfg, packets, {.record_events = false}).report.overall_packet_loss_pct;
  };

  CalibrationResult best;
  best.target_loss_pct = target_loss_pct;
  best.period = period;
  best.phase = phase;
  double best_err = INFINITY;
  auto consider = [&](std::int64_t ticks, double loss) {
    const double err = std::fabs(loss - target_loss_pct);
    if (err < best_err) {
      best_err = err;
      best.congested_ticks = ticks;
      best.achieved_loss_pct = loss;
    }
  };

  const double lo_loss = loss_at(0);
  consider(0, lo_loss);
  if (lo_loss > target_loss_pct + options.tolerance_pp) {
    throw Error(ErrorCode::UNREACHABLE,
                "baseline already loses " + fixed4(lo_loss) +
                    "% without congestion; target " + fixed4(target_loss_pct) +
                    "% is unreachable");
  }
  if (best_err > options.tolerance_pp) {
    const double hi_loss = loss_at(max_ticks);
    consider(max_ticks, hi_loss);
    if (hi_loss < target_loss_pct - options.tolerance_pp) {
      throw Error(ErrorCode::UNREACHABLE,
                  "even full congestion yields only " + fixed4(hi_loss) +
                      "% loss; target " + fixed4(target_loss_pct) +
                      "% is unreachable");
    }
    // Loss is non-decreasing in the congested tick count: each step only
    // adds one congested tick to the previous schedule.
    std::int64_t lo = 0, hi = max_ticks;
    while (best_err > options.tolerance_pp && hi - lo > 1 &&
           iterations < options.max_iterations) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      const double loss = loss_at(mid);
      consider(mid, loss);
      if (loss < target_loss_pct) lo = mid; else hi = mid;
    }
  }

  best.schedule = duty_cycle_schedule(period, best.congested_ticks, horizon, phase);
  best.iterations = iterations;
  best.within_tolerance = best_err <= options.tolerance_pp;
  return best;
}

std::string calibration_json(const CalibrationResult &r, int indent) {
  nlohmann::ordered_json j;
  j["horizon"] = r.schedule.horizon_ticks;
  j["windows"] = nlohmann::ordered_json::array();
  for (const auto &w : r.schedule.windows)
    j["windows"].push_back({w.start_tick, w.duration_ticks});
  j["target_loss_pct"] = round4(r.target_loss_pct);
  j["achieved_loss_pct"] = round4(r.achieved_loss_pct);
  j["within_tolerance"] = r.within_tolerance;
  j["period"] = r.period;
  j["phase"] = r.phase;
  j["congested_ticks"] = r.congested_ticks;
  j["congestion_fraction_pct"] = round4(100.0 * r.schedule.congestion_fraction());
  j["iterations"] = r.iterations;
  return j.dump(indent);
}

}  // namespace irapguard
