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

#include "irapguard/streamgen.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "irapguard/error.h"
#include "irapguard/random.h"

namespace irapguard {

namespace {

constexpr std::uint8_t kFiller = 0xAA;

struct ParamSet {
  int type;
  std::size_t bytes;
};

// Sizes in the range a typical encoder emits; exact values do not matter.
constexpr ParamSet kH265ParamSets[] = {{32, 24}, {33, 48}, {34, 8}};
constexpr ParamSet kH264ParamSets[] = {{7, 16}, {8, 6}};

constexpr int kH265IrapType = 19;     // IDR_W_RADL
constexpr int kH265NonIrapType = 1;   // TRAIL_R
constexpr int kH264IrapType = 5;      // IDR slice
constexpr int kH264NonIrapType = 1;   // non-IDR slice

void append_header(std::vector<std::uint8_t> &out, Codec codec, int type) {
  if (codec == Codec::H265) {
    out.push_back(static_cast<std::uint8_t>(type << 1));  // layer_id 0
    out.push_back(0x01);                                  // temporal_id 0
  } else {
    const int ref_idc = type == kH264NonIrapType ? 2 : 3;
    out.push_back(static_cast<std::uint8_t>((ref_idc << 5) | type));
  }
}

void append_unit(SynthStream &stream, Codec codec, int type,
                 std::size_t len, bool long_start_code) {
  auto &out = stream.bytes;
  if (long_start_code) out.push_back(0x00);
  out.insert(out.end(), {0x00, 0x00, 0x01});

  NalUnit unit;
  unit.index = stream.units.size();
  unit.byte_offset = out.size();
  unit.byte_len = len;
  unit.codec = codec;
  unit.nal_type = type;
  unit.cls = classify_nal(codec, type);
  stream.units.push_back(unit);

  append_header(out, codec, type);
  out.insert(out.end(), len - nal_header_size(codec), kFiller);
}

std::size_t jittered(std::size_t base, const SynthSpec &spec,
                     std::uint64_t frame) {
  if (spec.jitter_pct <= 0.0) return base;
  const double u = 2.0 * unit_interval(mix64(spec.seed, frame)) - 1.0;
  const double scaled =
      std::round(static_cast<double>(base) * (1.0 + u * spec.jitter_pct / 100.0));
  const double floor = static_cast<double>(nal_header_size(spec.codec));
  return static_cast<std::size_t>(std::max(scaled, floor));
}

void validate(const SynthSpec &spec) {
  const std::size_t hdr = nal_header_size(spec.codec);
  auto fail = [](const std::string &msg) {
    throw Error(ErrorCode::INVALID_SPEC, msg);
  };
  if (spec.frame_count < 1) fail("frame_count must be >= 1");
  if (spec.irap_period < 1) fail("irap_period must be >= 1");
  if (spec.irap_nal_bytes < hdr || spec.non_irap_nal_bytes < hdr) {
    fail("NAL sizes must be at least the " + std::to_string(hdr) +
         "-byte header");
  }
  if (!(spec.jitter_pct >= 0.0 && spec.jitter_pct < 100.0)) {
    fail("jitter_pct must be in [0, 100)");
  }
}

}  // namespace

int expected_irap_count(const SynthSpec &spec) {
  return (spec.frame_count + spec.irap_period - 1) / spec.irap_period;
}

SynthStream generate_stream(const SynthSpec &spec) {
  validate(spec);
  SynthStream stream;

  if (spec.include_parameter_sets) {
    if (spec.codec == Codec::H265) {
      for (const auto &ps : kH265ParamSets)
        append_unit(stream, spec.codec, ps.type, ps.bytes, true);
    } else {
      for (const auto &ps : kH264ParamSets)
        append_unit(stream, spec.codec, ps.type, ps.bytes, true);
    }
  }

  const int irap_type =
      spec.codec == Codec::H265 ? kH265IrapType : kH264IrapType;
  const int non_irap_type =
      spec.codec == Codec::H265 ? kH265NonIrapType : kH264NonIrapType;
  for (int i = 0; i < spec.frame_count; ++i) {
    const bool irap = i % spec.irap_period == 0;
    const std::size_t base = irap ? spec.irap_nal_bytes : spec.non_irap_nal_bytes;
    // 4-byte start codes ahead of IRAP pictures, 3-byte elsewhere, so both
    // framings appear in every stream.
    append_unit(stream, spec.codec, irap ? irap_type : non_irap_type,
                jittered(base, spec, static_cast<std::uint64_t>(i)), irap);
  }
  return stream;
}

std::vector<CorpusEntry> default_synthetic_corpus() {
  struct Row {
    const char *resolution;
    int qp;
    int packets_per_irap;
    int irap_period;
  };
  // Lower QP and larger pictures mean more packets per IRAP picture.
  static constexpr Row kRows[] = {
      {"416x240", 22, 4, 250},   {"416x240", 27, 3, 250},
      {"416x240", 32, 2, 250},   {"416x240", 37, 2, 250},
      {"832x480", 22, 8, 250},   {"832x480", 27, 6, 250},
      {"832x480", 32, 4, 250},   {"832x480", 37, 3, 250},
      {"1280x720", 22, 14, 250}, {"1280x720", 27, 10, 250},
      {"1280x720", 32, 7, 250},  {"1280x720", 37, 5, 250},
  };
  constexpr std::size_t kPayload = 1400;

  std::vector<CorpusEntry> corpus;
  std::uint64_t seed = 1;
  for (const Row &row : kRows) {
    CorpusEntry e;
    e.id = std::string("synth_") + row.resolution + "_qp" + std::to_string(row.qp);
    e.spec.codec = Codec::H265;
    e.spec.frame_count = 600;
    e.spec.irap_period = row.irap_period;
    // Sized a little under a payload multiple so jitter rarely adds a packet.
    e.spec.irap_nal_bytes = row.packets_per_irap * kPayload - kPayload / 4;
    e.spec.non_irap_nal_bytes =
        std::max<std::size_t>(e.spec.irap_nal_bytes / 10, 64);
    e.spec.include_parameter_sets = true;
    e.spec.seed = seed++;
    e.spec.jitter_pct = 15.0;
    e.tags["resolution"] = row.resolution;
    e.tags["qp"] = std::to_string(row.qp);
    corpus.push_back(std::move(e));
  }
  return corpus;
}

std::vector<CorpusEntry> resolution_ladder_corpus(
    const std::vector<int> &packets_per_irap, std::size_t payload_size) {
  std::vector<CorpusEntry> corpus;
  for (int pp : packets_per_irap) {
    CorpusEntry e;
    e.id = "ladder_pp" + std::to_string(pp);
    e.spec.codec = Codec::H265;
    // Same GOP shape as the default corpus; only picture size changes.
    e.spec.frame_count = 600;
    e.spec.irap_period = 250;
    e.spec.irap_nal_bytes = static_cast<std::size_t>(pp) * payload_size;
    e.spec.non_irap_nal_bytes =
        std::max<std::size_t>(e.spec.irap_nal_bytes / 10, 64);
    e.spec.include_parameter_sets = true;
    e.tags["packets_per_irap"] = std::to_string(pp);
    corpus.push_back(std::move(e));
  }
  return corpus;
}

std::string synth_spec_json(const SynthSpec &spec) {
  nlohmann::ordered_json j;
  j["codec"] = codec_name(spec.codec);
  j["frame_count"] = spec.frame_count;
  j["irap_period"] = spec.irap_period;
  j["irap_nal_bytes"] = spec.irap_nal_bytes;
  j["non_irap_nal_bytes"] = spec.non_irap_nal_bytes;
  j["include_parameter_sets"] = spec.include_parameter_sets;
  j["seed"] = spec.seed;
  j["jitter_pct"] = spec.jitter_pct;
  return j.dump(2);
}

SynthSpec synth_spec_from_json(const std::string &text) {
  SynthSpec spec;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.contains("codec")) spec.codec = codec_from_name(j["codec"].get<std::string>());
    spec.frame_count = j.value("frame_count", spec.frame_count);
    spec.irap_period = j.value("irap_period", spec.irap_period);
    spec.irap_nal_bytes = j.value("irap_nal_bytes", spec.irap_nal_bytes);
    spec.non_irap_nal_bytes = j.value("non_irap_nal_bytes", spec.non_irap_nal_bytes);
    spec.include_parameter_sets =
        j.value("include_parameter_sets", spec.include_parameter_sets);
    spec.seed = j.value("seed", spec.seed);
    spec.jitter_pct = j.value("jitter_pct", spec.jitter_pct);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::PARSE_ERROR, std::string("synth spec: ") + e.what());
  }
  return spec;
}

std::string unit_manifest_json(const std::vector<NalUnit> &units) {
  nlohmann::ordered_json j;
  j["codec"] = units.empty() ? "" : codec_name(units.front().codec);
  j["units"] = nlohmann::ordered_json::array();
  for (const NalUnit &u : units) {
    nlohmann::ordered_json ju;
    ju["index"] = u.index;
    ju["byte_offset"] = u.byte_offset;
    ju["byte_len"] = u.byte_len;
    ju["nal_type"] = u.nal_type;
    ju["class"] = nal_class_name(u.cls);
    j["units"].push_back(std::move(ju));
  }
  return j.dump(2);
}

}  // namespace irapguard
