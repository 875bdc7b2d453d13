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

#include "irapguard/bitstream.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

#include "irapguard/error.h"
#include "json_util.h"

namespace irapguard {

const char *error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EMPTY_INPUT: return "EmptyInput";
    case ErrorCode::NO_START_CODE: return "NoStartCode";
    case ErrorCode::MALFORMED_UNIT: return "MalformedUnit";
    case ErrorCode::FORBIDDEN_BIT_SET: return "ForbiddenBitSet";
    case ErrorCode::TOO_SHORT: return "TooShort";
    case ErrorCode::OUT_OF_RANGE: return "OutOfRange";
    case ErrorCode::INVALID_SPEC: return "InvalidSpec";
    case ErrorCode::INVALID_PAYLOAD_SIZE: return "InvalidPayloadSize";
    case ErrorCode::INVALID_CONFIG: return "InvalidConfig";
    case ErrorCode::EMPTY_STREAM: return "EmptyStream";
    case ErrorCode::INVALID_PERIOD: return "InvalidPeriod";
    case ErrorCode::INVALID_PARAMS: return "InvalidParams";
    case ErrorCode::UNREACHABLE: return "Unreachable";
    case ErrorCode::IO_ERROR: return "IoError";
    case ErrorCode::PARSE_ERROR: return "ParseError";
  }
  return "Unknown";
}

const char *codec_name(Codec codec) {
  return codec == Codec::H264 ? "H264" : "H265";
}

Codec codec_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "h264" || lower == "avc" || lower == "h.264") return Codec::H264;
  if (lower == "h265" || lower == "hevc" || lower == "h.265") return Codec::H265;
  throw Error(ErrorCode::PARSE_ERROR, "unknown codec '" + std::string(name) +
                                          "' (expected h264 or h265)");
}

const char *nal_class_name(NalClass cls) {
  switch (cls) {
    case NalClass::IRAP_VCL: return "IRAP_VCL";
    case NalClass::NON_IRAP_VCL: return "NON_IRAP_VCL";
    case NalClass::NON_VCL: return "NON_VCL";
  }
  return "?";
}

NalHeader parse_nal_header(std::span<const std::uint8_t> header_bytes,
                           Codec codec) {
  if (header_bytes.size() < nal_header_size(codec)) {
    throw Error(ErrorCode::TOO_SHORT,
                std::string(codec_name(codec)) + " NAL header needs " +
                    std::to_string(nal_header_size(codec)) + " byte(s), got " +
                    std::to_string(header_bytes.size()));
  }
  const std::uint8_t b0 = header_bytes[0];
  if (b0 & 0x80) {
    throw Error(ErrorCode::FORBIDDEN_BIT_SET, "forbidden_zero_bit is set");
  }
  NalHeader hdr;
  if (codec == Codec::H264) {
    hdr.ref_idc = (b0 >> 5) & 0x03;
    hdr.nal_type = b0 & 0x1f;
  } else {
    const std::uint8_t b1 = header_bytes[1];
    hdr.nal_type = (b0 >> 1) & 0x3f;
    hdr.layer_id = ((b0 & 0x01) << 5) | (b1 >> 3);
    hdr.temporal_id_plus1 = b1 & 0x07;
  }
  return hdr;
}

NalClass classify_nal(Codec codec, int nal_type) {
  if (nal_type < 0 || nal_type >= nal_type_count(codec)) {
    throw Error(ErrorCode::OUT_OF_RANGE,
                "nal_type " + std::to_string(nal_type) + " out of range for " +
                    codec_name(codec));
  }
  if (codec == Codec::H264) {
    if (nal_type == 5) return NalClass::IRAP_VCL;
    if (nal_type >= 1 && nal_type <= 4) return NalClass::NON_IRAP_VCL;
    return NalClass::NON_VCL;
  }
  // H.265: 0..15 non-IRAP VCL, 16..23 IRAP, 24..31 reserved VCL, 32.. non-VCL
  if (nal_type >= 16 && nal_type <= 23) return NalClass::IRAP_VCL;
  if (nal_type < 32) return NalClass::NON_IRAP_VCL;
  return NalClass::NON_VCL;
}

namespace {

// Position of the next 00 00 01 prefix at or after `from`, or size().
std::size_t find_start_code(std::span<const std::uint8_t> bytes,
                            std::size_t from) {
  const std::size_t n = bytes.size();
  for (std::size_t i = from; i + 2 < n; ++i) {
    if (bytes[i + 2] > 1) {
      // no prefix can end at i+2; skip ahead
      i += 2;
      continue;
    }
    if (bytes[i] == 0 && bytes[i + 1] == 0 && bytes[i + 2] == 1) return i;
  }
  return n;
}

}  // namespace

std::vector<NalUnit> scan_annexb(std::span<const std::uint8_t> bytes,
                                 Codec codec) {
  if (bytes.empty()) throw Error(ErrorCode::EMPTY_INPUT, "empty bitstream");

  std::size_t sc = find_start_code(bytes, 0);
  if (sc == bytes.size()) {
    throw Error(ErrorCode::NO_START_CODE, "no Annex-B start code found");
  }

  std::vector<NalUnit> units;
  const std::size_t hdr_size = nal_header_size(codec);
  while (sc < bytes.size()) {
    const std::size_t begin = sc + 3;
    const std::size_t next = find_start_code(bytes, begin);
    std::size_t end = next;
    while (end > begin && bytes[end - 1] == 0) --end;

    const std::size_t len = end - begin;
    if (len < hdr_size) {
      throw Error(ErrorCode::MALFORMED_UNIT,
                  "NAL unit at offset " + std::to_string(begin) + " has " +
                      std::to_string(len) + " byte(s), shorter than its header");
    }
    const NalHeader hdr = parse_nal_header(bytes.subspan(begin, hdr_size), codec);

    NalUnit unit;
    unit.index = units.size();
    unit.byte_offset = begin;
    unit.byte_len = len;
    unit.codec = codec;
    unit.nal_type = hdr.nal_type;
    unit.cls = classify_nal(codec, hdr.nal_type);
    units.push_back(unit);
    sc = next;
  }
  return units;
}

StreamStats stream_stats(std::span<const NalUnit> units) {
  StreamStats stats;
  for (NalClass cls : kAllNalClasses) {
    stats.count_by_class[cls] = 0;
    stats.percent_by_class[cls] = 0.0;
  }
  stats.nal_count = units.size();
  stats.bytes_per_nal.reserve(units.size());
  for (const NalUnit &u : units) {
    stats.bytes_per_nal.push_back(u.byte_len);
    ++stats.count_by_class[u.cls];
    ++stats.count_by_type[u.nal_type];
  }
  if (stats.nal_count > 0) {
    for (auto &[cls, pct] : stats.percent_by_class) {
      pct = 100.0 * static_cast<double>(stats.count_by_class[cls]) /
            static_cast<double>(stats.nal_count);
    }
  }
  return stats;
}

namespace {

nlohmann::ordered_json summary_json(const std::vector<std::size_t> &values) {
  nlohmann::ordered_json j;
  if (values.empty()) {
    j["min"] = 0;
    j["max"] = 0;
    j["mean"] = 0.0;
    j["total"] = 0;
    return j;
  }
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const std::size_t total =
      std::accumulate(values.begin(), values.end(), std::size_t{0});
  j["min"] = *mn;
  j["max"] = *mx;
  j["mean"] = round4(static_cast<double>(total) /
                     static_cast<double>(values.size()));
  j["total"] = total;
  return j;
}

}  // namespace

std::string stream_stats_json(const StreamStats &stats, int indent) {
  nlohmann::ordered_json j;
  j["nal_count"] = stats.nal_count;
  nlohmann::ordered_json by_class, pct_by_class, by_type;
  for (NalClass cls : kAllNalClasses) {
    auto c = stats.count_by_class.find(cls);
    auto p = stats.percent_by_class.find(cls);
    by_class[nal_class_name(cls)] =
        c == stats.count_by_class.end() ? 0 : c->second;
    pct_by_class[nal_class_name(cls)] =
        p == stats.percent_by_class.end() ? 0.0 : round4(p->second);
  }
  for (const auto &[type, count] : stats.count_by_type) {
    by_type[std::to_string(type)] = count;
  }
  j["count_by_class"] = by_class;
  j["percent_by_class"] = pct_by_class;
  j["count_by_type"] = by_type.is_null() ? nlohmann::ordered_json::object()
                                         : by_type;
  j["bytes_per_nal_summary"] = summary_json(stats.bytes_per_nal);
  if (!stats.packets_per_nal.empty()) {
    j["packets_per_nal_summary"] = summary_json(stats.packets_per_nal);
  }
  return j.dump(indent);
}

}  // namespace irapguard
