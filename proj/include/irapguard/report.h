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

//! @file report.h
//! Paired baseline/policy comparisons across a sweep: per-cell scatter
//! points (x = baseline IRAP packet loss, y = policy IRAP packet loss),
//! grand means, the relative reduction, an OLS fit of y on x, and the same
//! summaries grouped by any metadata tag (resolution, QP, ...).

#ifndef IRAPGUARD_REPORT_H_
#define IRAPGUARD_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irapguard/bitstream.h"
#include "irapguard/simulator.h"

namespace irapguard {

struct StreamMetadata {
  std::string stream_id;
  Codec codec{Codec::H265};
  std::size_t payload_size{kDefaultPayloadSize};
  double packets_per_irap_nal_mean{0.0};
  std::map<std::string, std::string> tags;  // e.g. resolution, qp
};

//! One point of a sweep. Both reports come from the same packets and the
//! same calibrated schedule.
struct SweepCell {
  StreamMetadata stream;
  double target_loss_pct{0.0};
  std::uint64_t seed{0};
  RunReport baseline;
  RunReport policy;
  std::optional<bool> replay_ok;  // set when the sweep re-validated event logs

  double x() const { return baseline.irap_packet_loss_pct; }
  double y() const { return policy.irap_packet_loss_pct; }
};

struct LinearFit {
  std::optional<double> slope;  // empty when x has no spread
  std::optional<double> intercept;
};

struct PairStats {
  std::size_t count{0};
  double mean_x{0.0};
  double mean_y{0.0};
  double stddev_x{0.0};
  double stddev_y{0.0};
  std::optional<double> reduction_pct;  // empty when mean_x == 0
  LinearFit fit;
  std::size_t above_diagonal{0};  // cells with y > x
  double mean_baseline_irap_nal_loss_pct{0.0};
  double mean_policy_irap_nal_loss_pct{0.0};
  double mean_baseline_total_loss_pct{0.0};
  double mean_policy_total_loss_pct{0.0};
};

struct GroupSummary {
  std::string tag;
  std::string value;
  PairStats stats;
};

struct SweepSummary {
  PairStats overall;
  std::vector<GroupSummary> groups;  // sorted by (tag, value)
};

//! Throws Error{EMPTY_INPUT}.
SweepSummary aggregate(std::span<const SweepCell> cells);

//! Pair statistics over raw (x, y) points; the building block of aggregate().
PairStats pair_stats(std::span<const std::pair<double, double>> points);

std::string summary_json(const SweepSummary &summary, int indent = 2);

//! Writes cells.csv, summary.json and scatter.csv into out_dir (created if
//! missing). Throws Error{IO_ERROR}.
void write_outputs(const SweepSummary &summary,
                   std::span<const SweepCell> cells,
                   const std::filesystem::path &out_dir);

extern const char *const kCellsCsvHeader;
extern const char *const kScatterCsvHeader;

}  // namespace irapguard

#endif  // IRAPGUARD_REPORT_H_
