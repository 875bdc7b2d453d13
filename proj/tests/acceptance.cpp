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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "irapguard/bitstream.h"
#include "irapguard/error.h"
#include "irapguard/report.h"
#include "irapguard/streamgen.h"
#include "irapguard/sweep.h"
#include "test_util.h"

namespace irapguard {
namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool ok{true};
  std::string detail;
};

// Criterion 6 collects from every run made by criteria 1-5.
struct ConservationLedger {
  std::size_t runs{0};
  std::size_t conservation_failures{0};
  std::size_t replay_failures{0};
  std::string first_violation;

  void check(const RunResult &r) {
    ++runs;
    if (!testing::conserved(r.report)) ++conservation_failures;
    const ReplayResult rr = replay_check(r.events, r.report.config);
    if (!rr.ok) {
      if (replay_failures++ == 0) first_violation = rr.violation;
    }
  }
  void check_cell(const SweepCell &c) {
    runs += 2;
    if (!testing::conserved(c.baseline)) ++conservation_failures;
    if (!testing::conserved(c.policy)) ++conservation_failures;
    if (!c.replay_ok || !*c.replay_ok) {
      if (replay_failures++ == 0) first_violation = "sweep cell " + c.stream.stream_id;
    }
  }
};

ConservationLedger g_ledger;

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int g_failures = 0;

void report(int id, const std::string &name, double limit_s,
            const std::function<Verdict()> &body) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception &e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) {
    v.ok = false;
    v.detail += "; runtime " + fmt("%.1f", secs) + " s over limit " + fmt("%.0f", limit_s) + " s";
  }
  if (!v.ok) ++g_failures;
  std::printf("%s criterion %d: %s [%s] (%.2f s)\n", v.ok ? "PASS" : "FAIL", id,
              name.c_str(), v.detail.c_str(), secs);
  std::fflush(stdout);
}

SimulationConfig random_config(std::mt19937_64 &rng, std::size_t packet_count) {
  SimulationConfig cfg;
  cfg.input_rate = 1 + static_cast<std::int64_t>(rng() % 10);
  cfg.output_rate = static_cast<std::int64_t>(rng() % 16);
  cfg.buffer_capacity = 1 + static_cast<std::int64_t>(rng() % 20);
  cfg.policy_options.protect_non_vcl = rng() % 4 != 0;
  const std::int64_t horizon =
      arrival_span_ticks(packet_count, cfg.input_rate) + static_cast<std::int64_t>(rng() % 10);
  switch (rng() % 3) {
    case 0:
      cfg.schedule = random_schedule(1.0 + static_cast<double>(rng() % 12),
                                     1.0 + static_cast<double>(rng() % 12), horizon, rng());
      break;
    case 1: {
      const std::int64_t p = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(horizon));
      cfg.schedule = periodic_schedule(
          p, static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p + 1)), horizon);
      break;
    }
    default: {
      const std::int64_t period = std::clamp<std::int64_t>(horizon, 1, 10);
      const std::int64_t cap = duty_cycle_capacity(period, horizon);
      cfg.schedule = duty_cycle_schedule(
          period, static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(cap + 1)),
          horizon);
      break;
    }
  }
  return cfg;
}

// 1. The content-aware policy never preemptively drops an IRAP packet.
Verdict never_drop_irap() {
  std::mt19937_64 rng(20260101);
  constexpr int kCases = 2000;
  std::size_t preemptive_total = 0, irap_preemptive = 0;
  for (int i = 0; i < kCases; ++i) {
    const double share = std::uniform_real_distribution<double>(0.0, 0.9)(rng);
    const auto packets = testing::random_packets(rng, 1 + rng() % 200, 1 + rng() % 12, share);
    SimulationConfig cfg = random_config(rng, packets.size());
    cfg.policy = PolicyKind::CONTENT_AWARE;
    const RunResult r = run(cfg, packets);
    g_ledger.check(r);
    for (const SimEvent &e : r.events) {
      if (e.kind != EventKind::DROP_PREEMPTIVE) continue;
      ++preemptive_total;
      if (packets[e.packet_id].cls == NalClass::IRAP_VCL) ++irap_preemptive;
    }
  }
  return {irap_preemptive == 0,
          std::to_string(kCases) + " cases, " + std::to_string(preemptive_total) +
              " preemptive drops, " + std::to_string(irap_preemptive) + " of them IRAP"};
}

struct CorpusSweep {
  std::vector<SweepStream> streams;
  std::vector<SweepCell> cells;
  double seconds{0.0};
};

// Twelve synthetic streams at default device settings, each concatenated
// 200 times so a calibrated schedule spans many periods.
const CorpusSweep &synthetic_sweep() {
  static const CorpusSweep sweep = [] {
    CorpusSweep s;
    const auto t0 = Clock::now();
    for (const CorpusEntry &e : default_synthetic_corpus()) {
      const SynthStream stream = generate_stream(e.spec);
      s.streams.push_back(
          make_sweep_stream(e.id, stream.units, kDefaultPayloadSize, 200, e.tags));
    }
    SweepOptions opts;
    opts.verify_replay = true;
    s.cells = run_sweep(s.streams, opts);
    s.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return s;
  }();
  return sweep;
}

// 2. Per cell, the policy never loses more IRAP packets than the baseline.
Verdict dominance() {
  const CorpusSweep &s = synthetic_sweep();
  std::size_t worse = 0;
  double worst_gap = 0.0;
  for (const SweepCell &c : s.cells) {
    g_ledger.check_cell(c);
    if (c.y() > c.x()) {
      ++worse;
      worst_gap = std::max(worst_gap, c.y() - c.x());
    }
  }
  const bool shape = s.streams.size() == 12 && s.cells.size() == 12 * 10;
  return {shape && worse == 0,
          std::to_string(s.cells.size()) + " cells over " + std::to_string(s.streams.size()) +
              " streams, " + std::to_string(worse) + " above diagonal" +
              (worse ? ", worst +" + fmt("%.4f", worst_gap) + " pp" : "")};
}

// 3. Mean IRAP packet loss reduction of at least 70 %.
Verdict headline_reduction() {
  const CorpusSweep &s = synthetic_sweep();
  double pp_sum = 0.0;
  for (const SweepStream &st : s.streams) pp_sum += st.meta.packets_per_irap_nal_mean;
  const double pp_mean = pp_sum / static_cast<double>(s.streams.size());
  const SweepSummary summary = aggregate(s.cells);
  const double reduction = summary.overall.reduction_pct.value_or(0.0);
  const SimulationConfig defaults;
  const bool device_defaults = defaults.buffer_capacity == 60 && defaults.input_rate == 60 &&
                               defaults.output_rate == 120;
  return {device_defaults && pp_mean <= 10.0 && reduction >= 70.0 && s.seconds < 120.0,
          "mean packets/IRAP " + fmt("%.2f", pp_mean) + ", baseline " +
              fmt("%.2f", summary.overall.mean_x) + "% -> policy " +
              fmt("%.2f", summary.overall.mean_y) + "%, reduction " +
              fmt("%.2f", reduction) + "% (need >= 70); shared sweep " +
              fmt("%.1f", s.seconds) + " s"};
}

// 4. Larger IRAP pictures lose more, even under the policy.
Verdict resolution_trend() {
  const std::vector<int> ladder = {5, 20, 60, 120};
  std::vector<SweepStream> streams;
  for (const CorpusEntry &e : resolution_ladder_corpus(ladder, kDefaultPayloadSize)) {
    const SynthStream stream = generate_stream(e.spec);
    // Repeat until the calibrated schedule spans at least 20 periods.
    const std::size_t once = packetize(stream.units, kDefaultPayloadSize).size();
    const std::size_t wanted = 20 * 100 * 60;
    const int repeat = static_cast<int>((wanted + once - 1) / once);
    streams.push_back(
        make_sweep_stream(e.id, stream.units, kDefaultPayloadSize, repeat, e.tags));
  }
  SweepOptions opts;
  opts.verify_replay = true;
  const auto cells = run_sweep(streams, opts);
  std::vector<double> means(ladder.size(), 0.0), counts(ladder.size(), 0.0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    g_ledger.check_cell(cells[i]);
    const std::size_t k = i / opts.targets.size();
    means[k] += cells[i].y();
    counts[k] += 1.0;
  }
  std::string detail = "mean policy IRAP loss";
  bool ok = true;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    means[k] /= counts[k];
    detail += " pp" + std::to_string(ladder[k]) + "=" + fmt("%.3f", means[k]) + "%";
    if (k > 0 && means[k] < means[k - 1]) ok = false;
  }
  ok = ok && means.back() > means.front();
  if (means.front() > 0.0) detail += ", ratio " + fmt("%.1f", means.back() / means.front()) + "x";
  return {ok, detail};
}

// Placements of IRAP ('I') and non-IRAP ('N') packets; a few longer
// templates add parameter-set packets ('P').
std::vector<std::string> short_templates() {
  std::vector<std::string> out;
  for (int len = 1; len <= 5; ++len)
    for (int mask = 0; mask < (1 << len); ++mask) {
      std::string s;
      for (int b = 0; b < len; ++b) s += (mask >> b) & 1 ? 'I' : 'N';
      out.push_back(s);
    }
  return out;
}

std::vector<std::string> long_templates() {
  auto tile = [](const std::string &unit, std::size_t n) {
    std::string s;
    while (s.size() < n) s += unit;
    return s.substr(0, n);
  };
  return {
      tile("IIINNNNNNN", 40), tile("INNN", 40),       tile("N", 40),
      tile("I", 40),          tile("PPIIIINNNNNNNNNNNNNN", 40),
      tile("NNNNNNNNNI", 40), tile("IIIIIIIINNNNNNNNNNNN", 30),
      tile("NINNIINNNI", 25),
  };
}

// Every schedule with at most two windows whose endpoints lie on `grid`
// ticks of [0, horizon].
std::vector<CongestionSchedule> all_schedules(std::int64_t horizon, std::int64_t grid) {
  std::vector<CongestionSchedule> out;
  CongestionSchedule none;
  none.horizon_ticks = horizon;
  out.push_back(none);
  std::vector<CongestionWindow> singles;
  for (std::int64_t a = 0; a <= horizon; a += grid)
    for (std::int64_t b = a + grid; b <= horizon; b += grid) singles.push_back({a, b - a});
  for (const auto &w : singles) {
    CongestionSchedule s = none;
    s.windows = {w};
    out.push_back(s);
  }
  for (const auto &w1 : singles)
    for (const auto &w2 : singles) {
      if (w2.start_tick < w1.end_tick()) continue;
      CongestionSchedule s = none;
      s.windows = {w1, w2};
      out.push_back(s);
    }
  return out;
}

// 5. Event traces equal the brute-force reference model exactly.
Verdict oracle_equivalence() {
  std::size_t runs = 0, mismatches = 0;
  std::string first;
  auto compare = [&](const std::string &pattern, SimulationConfig cfg,
                     const std::vector<PacketDescriptor> &packets) {
    for (PolicyKind policy : {PolicyKind::CONTENT_AWARE, PolicyKind::TAIL_DROP}) {
      cfg.policy = policy;
      const RunResult r = run(cfg, packets);
      g_ledger.check(r);
      ++runs;
      if (testing::as_ref_events(r.events) != refsim::simulate(testing::ref_input(cfg, packets))) {
        if (mismatches++ == 0) {
          first = pattern + " buffer " + std::to_string(cfg.buffer_capacity) + " " +
                  policy_name(policy);
        }
      }
    }
  };

  const auto short_scheds = all_schedules(8, 1);
  const std::vector<std::pair<int, int>> short_rates = {{1, 1}, {1, 2}, {2, 1}, {2, 3}};
  for (const std::string &pattern : short_templates()) {
    const auto packets = testing::packets_from_pattern(pattern);
    for (std::int64_t buffer = 1; buffer <= 5; ++buffer)
      for (const auto &[in, out] : short_rates)
        for (const CongestionSchedule &sched : short_scheds) {
          SimulationConfig cfg;
          cfg.buffer_capacity = buffer;
          cfg.input_rate = in;
          cfg.output_rate = out;
          cfg.schedule = sched;
          compare(pattern, cfg, packets);
        }
  }

  const auto long_scheds = all_schedules(20, 2);
  const std::vector<std::pair<int, int>> long_rates = {{2, 2}, {2, 3}, {3, 4}};
  for (const std::string &pattern : long_templates()) {
    const auto packets = testing::packets_from_pattern(pattern);
    for (std::int64_t buffer = 1; buffer <= 5; ++buffer)
      for (const auto &[in, out] : long_rates)
        for (const CongestionSchedule &sched : long_scheds)
          for (bool protect : {true, false}) {
            SimulationConfig cfg;
            cfg.buffer_capacity = buffer;
            cfg.input_rate = in;
            cfg.output_rate = out;
            cfg.schedule = sched;
            cfg.policy_options.protect_non_vcl = protect;
            compare(pattern, cfg, packets);
          }
  }
  return {mismatches == 0, std::to_string(runs) + " traces compared, " +
                               std::to_string(mismatches) + " mismatches" +
                               (mismatches ? " (first: " + first + ")" : "")};
}

// 6. Conservation and replay on every run above.
Verdict conservation_and_replay() {
  return {g_ledger.runs > 0 && g_ledger.conservation_failures == 0 &&
              g_ledger.replay_failures == 0,
          std::to_string(g_ledger.runs) + " runs, " +
              std::to_string(g_ledger.conservation_failures) + " conservation failures, " +
              std::to_string(g_ledger.replay_failures) + " replay failures" +
              (g_ledger.first_violation.empty() ? "" : " (" + g_ledger.first_violation + ")")};
}

// 7. Calibrated baseline loss within 0.5 pp of every target.
Verdict calibration_accuracy() {
  const CorpusSweep &s = synthetic_sweep();
  double worst = 0.0;
  std::size_t outside = 0;
  for (const SweepCell &c : s.cells) {
    const double err = std::fabs(c.baseline.overall_packet_loss_pct - c.target_loss_pct);
    worst = std::max(worst, err);
    if (err > 0.5) ++outside;
  }
  return {outside == 0 && !s.cells.empty() && s.seconds < 120.0,
          std::to_string(s.cells.size()) + " cells, targets 5..50, worst error " +
              fmt("%.4f", worst) + " pp, " + std::to_string(outside) + " outside 0.5 pp"};
}

// 8. Golden classification, fuzzed parsing, and generator round-trip.
Verdict parser_correctness() {
  // I = IRAP, N = non-IRAP VCL, P = non-VCL, indexed by NAL type.
  const std::string h264 = "PNNNNIPPPPPPPPPPPPPPPPPPPPPPPPPP";
  const std::string h265 =
      "NNNNNNNNNNNNNNNNIIIIIIIINNNNNNNNPPPPPPPPPPPPPPPPPPPPPPPPPPPPPPPP";
  auto expect = [](char c) {
    return c == 'I' ? NalClass::IRAP_VCL : c == 'N' ? NalClass::NON_IRAP_VCL : NalClass::NON_VCL;
  };
  std::size_t golden_bad = 0;
  for (int t = 0; t < 32; ++t)
    if (classify_nal(Codec::H264, t) != expect(h264[t])) ++golden_bad;
  for (int t = 0; t < 64; ++t)
    if (classify_nal(Codec::H265, t) != expect(h265[t])) ++golden_bad;

  std::mt19937_64 rng(8);
  std::size_t fuzz_unexpected = 0, fuzz_parsed = 0;
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::uint8_t> buf(rng() % 256);
    for (auto &b : buf) {
      const auto r = rng() % 8;
      b = r < 3 ? 0x00 : r == 3 ? 0x01 : static_cast<std::uint8_t>(rng());
    }
    const Codec codec = i % 2 ? Codec::H264 : Codec::H265;
    try {
      const auto units = scan_annexb(buf, codec);
      for (const NalUnit &u : units) {
        if (u.byte_offset + u.byte_len > buf.size()) ++fuzz_unexpected;
      }
      ++fuzz_parsed;
    } catch (const Error &) {
    } catch (...) {
      ++fuzz_unexpected;
    }
    try {
      parse_nal_header(buf, codec);
    } catch (const Error &) {
    } catch (...) {
      ++fuzz_unexpected;
    }
  }

  std::size_t streams = 0, roundtrip_bad = 0;
  auto roundtrip = [&](const SynthSpec &spec) {
    const SynthStream s = generate_stream(spec);
    ++streams;
    if (scan_annexb(s.bytes, spec.codec) != s.units) ++roundtrip_bad;
  };
  for (const CorpusEntry &e : default_synthetic_corpus()) roundtrip(e.spec);
  for (const CorpusEntry &e : resolution_ladder_corpus({5, 20, 60, 120}, kDefaultPayloadSize))
    roundtrip(e.spec);
  for (int i = 0; i < 200; ++i) {
    SynthSpec spec;
    spec.codec = i % 2 ? Codec::H264 : Codec::H265;
    spec.frame_count = 1 + static_cast<int>(rng() % 60);
    spec.irap_period = 1 + static_cast<int>(rng() % 20);
    spec.irap_nal_bytes = 2 + rng() % 5000;
    spec.non_irap_nal_bytes = 2 + rng() % 800;
    spec.include_parameter_sets = rng() % 2;
    spec.seed = rng();
    spec.jitter_pct = static_cast<double>(rng() % 50);
    roundtrip(spec);
  }

  return {golden_bad == 0 && fuzz_unexpected == 0 && roundtrip_bad == 0,
          "96 golden types, " + std::to_string(golden_bad) + " wrong; 10000 fuzz buffers, " +
              std::to_string(fuzz_parsed) + " scanned, " + std::to_string(fuzz_unexpected) +
              " unexpected failures; " + std::to_string(streams) + " generated streams, " +
              std::to_string(roundtrip_bad) + " round-trip mismatches"};
}

}  // namespace
}  // namespace irapguard

int main() {
  using namespace irapguard;
  report(1, "content-aware policy never preemptively drops IRAP", 30, never_drop_irap);
  report(2, "policy IRAP loss <= baseline in every sweep cell", 120, dominance);
  report(3, "mean IRAP packet loss reduction >= 70%", 120, headline_reduction);
  report(4, "IRAP loss non-decreasing with packets per IRAP picture", 60, resolution_trend);
  report(5, "traces match the reference simulator", 60, oracle_equivalence);
  report(6, "conservation and replay on all runs", 0, conservation_and_replay);
  report(7, "calibration within 0.5 pp for targets 5..50", 120, calibration_accuracy);
  report(8, "NAL golden table, fuzzing and generator round-trip", 0, parser_correctness);
  std::printf("%s: %d of 8 criteria failed\n", g_failures ? "FAIL" : "PASS", g_failures);
  return g_failures ? 1 : 0;
}
