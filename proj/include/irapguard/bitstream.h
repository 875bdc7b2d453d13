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

//! @file bitstream.h
//! Annex-B scanning, NAL header parsing and drop-priority classification for
//! H.264/AVC and H.265/HEVC elementary streams.
//!
//! Only header bytes are ever interpreted. Payload bytes (including any
//! emulation-prevention bytes) are carried through untouched, since what
//! matters to the forwarding device is how many bytes transit the network.

#ifndef IRAPGUARD_BITSTREAM_H_
#define IRAPGUARD_BITSTREAM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace irapguard {

enum class Codec { H264, H265 };

//! Drop-priority class of a NAL unit. IRAP_VCL is what the content-aware
//! policy protects.
enum class NalClass { IRAP_VCL, NON_IRAP_VCL, NON_VCL };

constexpr std::array<NalClass, 3> kAllNalClasses = {
    NalClass::IRAP_VCL, NalClass::NON_IRAP_VCL, NalClass::NON_VCL};

const char *codec_name(Codec codec);
Codec codec_from_name(std::string_view name);  // "h264"/"avc", "h265"/"hevc"
const char *nal_class_name(NalClass cls);

//! Header length in bytes: 1 for H.264, 2 for H.265.
constexpr std::size_t nal_header_size(Codec codec) {
  return codec == Codec::H264 ? 1 : 2;
}

//! Number of distinct nal_unit_type codes (32 for H.264, 64 for H.265).
constexpr int nal_type_count(Codec codec) {
  return codec == Codec::H264 ? 32 : 64;
}

struct NalHeader {
  int nal_type{0};
  // H.264 only
  int ref_idc{0};
  // H.265 only
  int layer_id{0};
  int temporal_id_plus1{0};
};

struct NalUnit {
  std::size_t index{0};
  std::size_t byte_offset{0};  // first header byte, start code excluded
  std::size_t byte_len{0};     // header included, trailing zeros excluded
  Codec codec{Codec::H265};
  int nal_type{0};
  NalClass cls{NalClass::NON_VCL};

  bool operator==(const NalUnit &) const = default;
};

struct StreamStats {
  std::size_t nal_count{0};
  std::vector<std::size_t> bytes_per_nal;
  std::map<NalClass, std::size_t> count_by_class;
  std::map<NalClass, double> percent_by_class;
  std::map<int, std::size_t> count_by_type;
  // Filled by fill_packets_per_nal() once a payload size is known.
  std::vector<std::size_t> packets_per_nal;
};

//! Splits an Annex-B byte stream into NAL units. Both 3- and 4-byte start
//! codes are accepted; bytes before the first start code and zero bytes
//! trailing a unit are ignored.
//! Throws Error{EMPTY_INPUT | NO_START_CODE | MALFORMED_UNIT |
//! FORBIDDEN_BIT_SET}.
std::vector<NalUnit> scan_annexb(std::span<const std::uint8_t> bytes,
                                 Codec codec);

//! Decodes the 1-byte (H.264) or 2-byte (H.265) NAL unit header.
//! Throws Error{TOO_SHORT | FORBIDDEN_BIT_SET}.
NalHeader parse_nal_header(std::span<const std::uint8_t> header_bytes,
                           Codec codec);

//! Throws Error{OUT_OF_RANGE} for codes outside the codec's type space.
NalClass classify_nal(Codec codec, int nal_type);

StreamStats stream_stats(std::span<const NalUnit> units);

//! JSON rendering of the inspect output. Kept here so the CLI and tests agree
//! on one schema.
std::string stream_stats_json(const StreamStats &stats, int indent = 2);

}  // namespace irapguard

#endif  // IRAPGUARD_BITSTREAM_H_
