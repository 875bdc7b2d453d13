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

#include "irapguard/report.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "irapguard/error.h"
#include "json_util.h"

namespace irapguard {

const char *const kCellsCsvHeader =
    "stream_id,codec,payload_size,packets_per_irap_nal_mean,tag_resolution,"
    "tag_qp,target_loss_pct,seed,baseline_total_loss_pct,"
    "baseline_irap_packet_loss_pct,baseline_irap_nal_loss_pct,"
    "policy_total_loss_pct,policy_irap_packet_loss_pct,"
    "policy_irap_nal_loss_pct";

const char *const kScatterCsvHeader =
    "x,y,stream_id,tag_resolution,tag_qp,target_loss_pct";

namespace {

// Summing in sorted order makes every aggregate independent of cell order.
double sorted_mean(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double d : v) sum += d;
  return sum / static_cast<double>(v.size());
}

PairStats cell_stats(const std::vector<const SweepCell *> &cells) {
  std::vector<std::pair<double, double>> points;
  std::vector<double> bn, pn, bt, pt;
  for (const SweepCell *c : cells) {
    points.emplace_back(c->x(), c->y());
    bn.push_back(c->baseline.irap_nal_loss_pct);
    pn.push_back(c->policy.irap_nal_loss_pct);
    bt.push_back(c->baseline.overall_packet_loss_pct);
    pt.push_back(c->policy.overall_packet_loss_pct);
  }
  PairStats s = pair_stats(points);
  s.mean_baseline_irap_nal_loss_pct = sorted_mean(std::move(bn));
  s.mean_policy_irap_nal_loss_pct = sorted_mean(std::move(pn));
  s.mean_baseline_total_loss_pct = sorted_mean(std::move(bt));
  s.mean_policy_total_loss_pct = sorted_mean(std::move(pt));
  return s;
}

std::string tag_or_empty(const SweepCell &c, const std::string &key) {
  auto it = c.stream.tags.find(key);
  return it == c.stream.tags.end() ? std::string() : it->second;
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

nlohmann::ordered_json optional_json(const std::optional<double> &v) {
  return v ? nlohmann::ordered_json(round4(*v)) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json pair_stats_json(const PairStats &s) {
  nlohmann::ordered_json j;
  j["count"] = s.count;
  j["mean_baseline_irap_packet_loss_pct"] = round4(s.mean_x);
  j["mean_policy_irap_packet_loss_pct"] = round4(s.mean_y);
  j["stddev_baseline_irap_packet_loss_pct"] = round4(s.stddev_x);
  j["stddev_policy_irap_packet_loss_pct"] = round4(s.stddev_y);
  j["reduction_pct"] = optional_json(s.reduction_pct);
  j["fit_slope"] = optional_json(s.fit.slope);
  j["fit_intercept"] = optional_json(s.fit.intercept);
  j["cells_above_diagonal"] = s.above_diagonal;
  j["mean_baseline_irap_nal_loss_pct"] = round4(s.mean_baseline_irap_nal_loss_pct);
  j["mean_policy_irap_nal_loss_pct"] = round4(s.mean_policy_irap_nal_loss_pct);
  j["mean_baseline_total_loss_pct"] = round4(s.mean_baseline_total_loss_pct);
  j["mean_policy_total_loss_pct"] = round4(s.mean_policy_total_loss_pct);
  return j;
}

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IO_ERROR, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IO_ERROR, "write failed: " + path.string());
}

}  // namespace

PairStats pair_stats(std::span<const std::pair<double, double>> points) {
  PairStats s;
  s.count = points.size();
  if (points.empty()) return s;

  std::vector<std::pair<double, double>> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  double sx = 0.0, sy = 0.0;
  for (const auto &[x, y] : sorted) {
    sx += x;
    sy += y;
    if (y > x) ++s.above_diagonal;
  }
  s.mean_x = sx / n;
  s.mean_y = sy / n;

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto &[x, y] : sorted) {
    sxx += (x - s.mean_x) * (x - s.mean_x);
    syy += (y - s.mean_y) * (y - s.mean_y);
    sxy += (x - s.mean_x) * (y - s.mean_y);
  }
  if (sorted.size() > 1) {
    s.stddev_x = std::sqrt(sxx / (n - 1.0));
    s.stddev_y = std::sqrt(syy / (n - 1.0));
  }
  if (s.mean_x > 0.0) s.reduction_pct = 100.0 * (s.mean_x - s.mean_y) / s.mean_x;
  if (sxx > 0.0) {
    s.fit.slope = sxy / sxx;
    s.fit.intercept = s.mean_y - *s.fit.slope * s.mean_x;
  }
  return s;
}

SweepSummary aggregate(std::span<const SweepCell> cells) {
  if (cells.empty()) throw Error(ErrorCode::EMPTY_INPUT, "no sweep cells to aggregate");

  SweepSummary summary;
  std::vector<const SweepCell *> all;
  for (const SweepCell &c : cells) all.push_back(&c);
  summary.overall = cell_stats(all);

  std::map<std::pair<std::string, std::string>, std::vector<const SweepCell *>> groups;
  for (const SweepCell &c : cells)
    for (const auto &[tag, value] : c.stream.tags) groups[{tag, value}].push_back(&c);
  for (const auto &[key, members] : groups)
    summary.groups.push_back({key.first, key.second, cell_stats(members)});
  return summary;
}

std::string summary_json(const SweepSummary &summary, int indent) {
  nlohmann::ordered_json j;
  j["overall"] = pair_stats_json(summary.overall);
  nlohmann::ordered_json groups = nlohmann::ordered_json::object();
  for (const GroupSummary &g : summary.groups)
    groups[g.tag][g.value] = pair_stats_json(g.stats);
  j["groups"] = groups;
  return j.dump(indent);
}

void write_outputs(const SweepSummary &summary, std::span<const SweepCell> cells,
                   const std::filesystem::path &out_dir) {
  if (out_dir.empty()) throw Error(ErrorCode::IO_ERROR, "output directory path is empty");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error(ErrorCode::IO_ERROR, "cannot create output directory " +
                                         out_dir.string() +
                                         (ec ? ": " + ec.message() : ""));
  }

  std::ostringstream cells_csv, scatter_csv;
  cells_csv << kCellsCsvHeader << '\n';
  scatter_csv << kScatterCsvHeader << '\n';
  for (const SweepCell &c : cells) {
    const std::string res = csv_field(tag_or_empty(c, "resolution"));
    const std::string qp = csv_field(tag_or_empty(c, "qp"));
    cells_csv << csv_field(c.stream.stream_id) << ',' << codec_name(c.stream.codec)
              << ',' << c.stream.payload_size << ','
              << fixed4(c.stream.packets_per_irap_nal_mean) << ',' << res << ','
              << qp << ',' << fixed4(c.target_loss_pct) << ',' << c.seed << ','
              << fixed4(c.baseline.overall_packet_loss_pct) << ','
              << fixed4(c.baseline.irap_packet_loss_pct) << ','
              << fixed4(c.baseline.irap_nal_loss_pct) << ','
              << fixed4(c.policy.overall_packet_loss_pct) << ','
              << fixed4(c.policy.irap_packet_loss_pct) << ','
              << fixed4(c.policy.irap_nal_loss_pct) << '\n';
    scatter_csv << fixed4(c.x()) << ',' << fixed4(c.y()) << ','
                << csv_field(c.stream.stream_id) << ',' << res << ',' << qp << ','
                << fixed4(c.target_loss_pct) << '\n';
  }

  write_file(out_dir / "cells.csv", cells_csv.str());
  write_file(out_dir / "scatter.csv", scatter_csv.str());
  write_file(out_dir / "summary.json", summary_json(summary) + "\n");
}

}  // namespace irapguard
