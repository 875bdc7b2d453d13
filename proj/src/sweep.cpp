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

#include "irapguard/sweep.h"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <thread>

#include "irapguard/error.h"
#include "irapguard/packetizer.h"

namespace irapguard {

SweepStream make_sweep_stream(std::string id, std::span<const NalUnit> units,
                              std::size_t payload_size, int repeat,
                              std::map<std::string, std::string> tags) {
  SweepStream s;
  s.meta.stream_id = std::move(id);
  s.meta.codec = units.empty() ? Codec::H265 : units.front().codec;
  s.meta.payload_size = payload_size;
  s.meta.packets_per_irap_nal_mean = packets_per_irap_nal_mean(units, payload_size);
  s.meta.tags = std::move(tags);
  s.packets = packetize(units, payload_size, repeat);
  return s;
}

namespace {

SweepCell run_cell(const SweepStream &stream, double target,
                   const SweepOptions &options) {
  SweepCell cell;
  cell.stream = stream.meta;
  cell.target_loss_pct = target;
  cell.seed = options.base.seed;

  SimulationConfig cfg = options.base;
  cfg.payload_size = stream.meta.payload_size;
  const CalibrationResult cal =
      calibrate(target, cfg, stream.packets, options.calibration);
  cfg.schedule = cal.schedule;

  const RunOptions run_opts{.record_events = options.verify_replay};
  cfg.policy = PolicyKind::TAIL_DROP;
  RunResult base = run(cfg, stream.packets, run_opts);
  cfg.policy = options.policy;
  RunResult pol = run(cfg, stream.packets, run_opts);

  if (options.verify_replay) {
    cell.replay_ok = replay_check(base.events, base.report.config).ok &&
                     replay_check(pol.events, pol.report.config).ok;
  }
  cell.baseline = std::move(base.report);
  cell.policy = std::move(pol.report);
  return cell;
}

}  // namespace

std::vector<SweepCell> run_sweep(std::span<const SweepStream> streams,
                                 const SweepOptions &options) {
  const std::size_t n_targets = options.targets.size();
  const std::size_t n_cells = streams.size() * n_targets;
  std::vector<SweepCell> cells(n_cells);
  std::vector<std::exception_ptr> errors(n_cells);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_cells; i = next++) {
      try {
        cells[i] = run_cell(streams[i / n_targets], options.targets[i % n_targets],
                            options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(n_cells)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }
  for (const auto &e : errors)
    if (e) std::rethrow_exception(e);
  return cells;
}

namespace {

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::PARSE_ERROR, "bad number '" + std::string(s) + "' in targets");
  }
  return v;
}

}  // namespace

std::vector<double> parse_targets(std::string_view text) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) {
      throw Error(ErrorCode::PARSE_ERROR, "targets range must be start:stop:step");
    }
    const double start = parse_number(text.substr(0, a));
    const double stop = parse_number(text.substr(a + 1, b - a - 1));
    const double step = parse_number(text.substr(b + 1));
    if (!(step > 0.0) || stop < start) {
      throw Error(ErrorCode::PARSE_ERROR, "targets range needs step > 0 and stop >= start");
    }
    // Indexed stepping avoids accumulating rounding error.
    for (int k = 0;; ++k) {
      const double v = start + k * step;
      if (v > stop + 1e-9) break;
      out.push_back(v);
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = text.find(',', pos);
      const auto piece = text.substr(pos, comma == std::string_view::npos
                                              ? std::string_view::npos
                                              : comma - pos);
      out.push_back(parse_number(piece));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  }
  for (double t : out) {
    if (!(t >= 0.0 && t <= 100.0))
      throw Error(ErrorCode::PARSE_ERROR, "targets must lie in [0, 100]");
  }
  return out;
}

}  // namespace irapguard
